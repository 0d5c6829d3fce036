"""Exact rational linear programming via two-phase primal simplex.

Small and dependency-free: every tableau entry is a ``fractions.Fraction``,
pivoting follows Bland's rule (no cycling), so optima are exact rationals.
Intended for the covering LPs behind the fractional chromatic number, whose
sizes stay tiny at desk scale.
"""

from __future__ import annotations

from fractions import Fraction

__all__ = ["simplex_min"]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _pivot(tableau: list[list[Fraction]], z: list[Fraction], basis: list[int], row: int, col: int) -> None:
    piv = tableau[row][col]
    tableau[row] = [x / piv for x in tableau[row]]
    prow = tableau[row]
    for i, r in enumerate(tableau):
        if i != row and r[col] != 0:
            f = r[col]
            tableau[i] = [a - f * b for a, b in zip(r, prow)]
    if z[col] != 0:
        f = z[col]
        for j, b in enumerate(prow):
            z[j] -= f * b
    basis[row] = col


def _run(tableau: list[list[Fraction]], basis: list[int], cost: list[Fraction], allowed: int) -> Fraction:
    """Minimize cost over the current feasible tableau; entering variables are
    restricted to column indices < allowed.  Returns the optimal value."""
    m = len(tableau)
    ncols = len(tableau[0]) - 1
    z = list(cost) + [_ZERO] * (ncols - len(cost)) + [_ZERO]
    for i, bv in enumerate(basis):
        if z[bv] != 0:
            f = z[bv]
            for j, b in enumerate(tableau[i]):
                z[j] -= f * b
    while True:
        enter = -1
        for j in range(allowed):
            if z[j] < 0:
                enter = j
                break
        if enter < 0:
            return -z[-1]
        leave = -1
        best = None
        for i in range(m):
            a = tableau[i][enter]
            if a > 0:
                ratio = tableau[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            raise ValueError("LP unbounded")
        _pivot(tableau, z, basis, leave, enter)


def simplex_min(a_rows, b, c) -> tuple[Fraction, list[Fraction]]:
    """Solve min c.x subject to A x >= b, x >= 0 exactly.

    ``a_rows`` is a dense matrix (list of rows); all inputs may be ints or
    Fractions.  Returns (optimal value, optimal x).
    """
    m = len(a_rows)
    n = len(c)
    cost = [Fraction(x) for x in c]
    tableau: list[list[Fraction]] = []
    basis: list[int] = []
    for i in range(m):
        row = [Fraction(x) for x in a_rows[i]]
        rhs = Fraction(b[i])
        surplus = [_ZERO] * m
        surplus[i] = Fraction(-1)
        if rhs < 0:
            row = [-x for x in row]
            surplus[i] = _ONE
            rhs = -rhs
        art = [_ZERO] * m
        art[i] = _ONE
        tableau.append(row + surplus + art + [rhs])
        basis.append(n + m + i)
    phase1 = [_ZERO] * (n + m) + [_ONE] * m
    infeas = _run(tableau, basis, phase1, n + 2 * m)
    if infeas != 0:
        raise ValueError("LP infeasible")
    # pivot leftover zero-value artificials out of the basis; drop redundant rows
    zdummy = [_ZERO] * (len(tableau[0]))
    for i in reversed(range(len(tableau))):
        if basis[i] >= n + m:
            col = next((j for j in range(n + m) if tableau[i][j] != 0), None)
            if col is None:
                del tableau[i]
                del basis[i]
            else:
                _pivot(tableau, zdummy, basis, i, col)
    value = _run(tableau, basis, cost, n + m)
    x = [_ZERO] * n
    for i, bv in enumerate(basis):
        if bv < n:
            x[bv] = tableau[i][-1]
    return value, x
