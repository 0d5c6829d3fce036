"""Declarative experiment recipes: an ordered list of named steps over the
library plus expected values checked at the end.

A recipe is data, not code: each step names an operation and its
parameters; a parameter of the form ``"$stepid"`` passes an earlier step's
graph or coloring.  Expectations compare step fields against ``equals`` /
``max`` / ``min`` bounds with an optional numeric tolerance.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from . import constructions as cons
from . import families as fam
from . import geometry as geom
from . import solvers as sol
from .core import Coloring, Graph, is_proper, is_s_wide, local_profile
from .io import coloring_to_obj, dump_json, graph_to_obj
from .solvers import BudgetExceeded

__all__ = ["RecipeError", "StepResult", "run_recipe", "EXIT_OK", "EXIT_FAIL", "EXIT_BUDGET", "EXIT_INPUT"]

EXIT_OK = 0
EXIT_FAIL = 2
EXIT_BUDGET = 3
EXIT_INPUT = 4


class RecipeError(ValueError):
    pass


@dataclass
class StepResult:
    fields: dict[str, Any]
    graph: Graph | None = None
    coloring: Coloring | None = None


Context = dict[str, StepResult]


def _ref(params: dict, key: str, ctx: Context, kind: str):
    val = params.get(key)
    if not (isinstance(val, str) and val.startswith("$")):
        raise RecipeError(f"parameter {key!r} must reference a step like '$id'")
    sid = val[1:]
    if sid not in ctx:
        raise RecipeError(f"step reference {val!r} not found")
    out = getattr(ctx[sid], kind)
    if out is None:
        raise RecipeError(f"step {sid!r} has no {kind}")
    return out


def _graph_fields(g: Graph) -> dict[str, Any]:
    return {"vertices": g.n, "edges": g.m}


def _coloring_fields(g: Graph, c: Coloring) -> dict[str, Any]:
    fields: dict[str, Any] = {
        "vertices": g.n,
        "colors_used": len(c.palette),
        "proper": is_proper(g, c),
    }
    if fields["proper"]:
        fields["max_plus_one"] = local_profile(g, c).max_plus_one
        for s in (1, 2, 3):
            fields[f"swide_{s}"] = is_s_wide(g, c, s)
    return fields


def _op_build(builder: Callable[..., Graph]):
    def run(params: dict, ctx: Context) -> StepResult:
        g = builder(**params)
        return StepResult(_graph_fields(g), graph=g)

    return run


def _op_gen_mycielski(params: dict, ctx: Context) -> StepResult:
    g = _ref(params, "graph", ctx, "graph")
    out = fam.gen_mycielski(g, int(params["r"]))
    return StepResult(_graph_fields(out), graph=out)


def _op_myc_tower(params: dict, ctx: Context) -> StepResult:
    tower = fam.gen_mycielski_iter(fam.complete(2), tuple(params["r"]))
    return StepResult(_graph_fields(tower.graph), graph=tower.graph)


def _coloring_step(c: Coloring) -> StepResult:
    return StepResult(_coloring_fields(c.graph, c), graph=c.graph, coloring=c)


def _op_sg_interval(params: dict, ctx: Context) -> StepResult:
    c = cons.sg_interval_coloring(
        int(params["n"]),
        int(params["k"]),
        tuple(params["sizes"]),
        rule=params.get("rule", "any-majority"),
    )
    if params.get("widen"):
        c = cons.widen_to_local(c.graph, c)
    return _coloring_step(c)


def _op_sg_refined(params: dict, ctx: Context) -> StepResult:
    res = cons.sg_refined_coloring(
        int(params["n"]), int(params["k"]), int(params["m"]), tuple(params["sizes"])
    )
    fields: dict[str, Any] = {
        "proper": res.proper,
        "max_plus_one": res.max_plus_one,
        "violating_edge": list(res.violating_edge) if res.violating_edge else None,
    }
    return StepResult(fields, graph=res.coloring.graph, coloring=res.coloring)


def _op_widen(params: dict, ctx: Context) -> StepResult:
    c0 = _ref(params, "coloring", ctx, "coloring")
    return _coloring_step(cons.widen_to_local(c0.graph, c0))


def _op_w_canonical(params: dict, ctx: Context) -> StepResult:
    return _coloring_step(cons.w_canonical_coloring(int(params["s"]), int(params["t"])))


def _op_gmyc_direct(params: dict, ctx: Context) -> StepResult:
    return _coloring_step(
        cons.gmyc_direct_coloring(
            tuple(params["r"]), refine_even_d=bool(params.get("refine_even_d", False))
        )
    )


def _op_gmyc_wide_ext(params: dict, ctx: Context) -> StepResult:
    c0 = _ref(params, "coloring", ctx, "coloring")
    return _coloring_step(cons.gmyc_wide_extension(c0.graph, c0, int(params["r"])))


def _op_solve(invariant: str):
    def run(params: dict, ctx: Context) -> StepResult:
        g = _ref(params, "graph", ctx, "graph")
        limit = params.get("limit_nodes")
        limit = int(limit) if limit is not None else None
        if invariant == "chi":
            value, col = sol.chromatic_number(g, node_limit=limit)
            return StepResult(
                {"invariant": "chi", "value": value, "exact": True},
                graph=g,
                coloring=col,
            )
        if invariant == "psi":
            res = sol.local_chromatic(g, node_limit=limit or 20_000_000)
            fields = {
                "invariant": "psi",
                "value": res.value,
                "exact": res.exact,
                "lower": res.lower,
                "upper": res.upper,
            }
            col = res.coloring(g) if res.classes is not None else None
            return StepResult(fields, graph=g, coloring=col)
        if invariant == "chi_f":
            value, _ = sol.fractional_chromatic(g)
            return StepResult(
                {"invariant": "chi_f", "value": str(value), "exact": True}, graph=g
            )
        if invariant == "chi_c":
            res = sol.circular_chromatic(g, node_limit=limit)
            return StepResult(
                {
                    "invariant": "chi_c",
                    "value": str(res.value),
                    "exact": res.exact,
                    "p": res.p,
                    "q": res.q,
                },
                graph=g,
                coloring=res.coloring,
            )
        raise RecipeError(f"unknown invariant {invariant!r}")

    return run


def _op_pipeline(params: dict, ctx: Context) -> StepResult:
    res = cons.oddsch_pipeline(int(params["t"]), int(params["i"]))
    fields = {
        "n": res.n,
        "k": res.k,
        "s": res.s,
        "p": res.p,
        "q": res.q,
        "value": str(res.value),
    }
    return StepResult(fields, graph=res.graph, coloring=res.coloring)


def _op_hemisphere(params: dict, ctx: Context) -> StepResult:
    rep = geom.hemisphere_stable_check(
        int(params["n"]),
        int(params["k"]),
        int(params.get("samples", 100_000)),
        int(params.get("seed", 0)),
    )
    return StepResult({"failures": rep.failures, "min_margin": rep.min_margin})


def _op_cover(params: dict, ctx: Context) -> StepResult:
    k = int(params["k"])
    plus = bool(params.get("plus", False))
    cov = geom.cover_plus(k) if plus else geom.simplex_cover(k)
    rep = geom.verify_cover(
        cov, int(params.get("samples", 100_000)), int(params.get("seed", 0))
    )
    return StepResult(
        {
            "sets": rep.sets,
            "coverage": rep.coverage,
            "max_multiplicity": rep.max_multiplicity,
            "antipodal_conflicts": rep.antipodal_conflicts,
            "max_either_or": rep.max_either_or,
        }
    )


def _op_borsuk_wide(params: dict, ctx: Context) -> StepResult:
    import numpy as np

    rng = np.random.default_rng(int(params.get("seed", 0)))
    n = int(params["n"])
    pts = geom.sample_sphere(n - 1, int(params.get("points", 2000)), rng)
    rep = geom.borsuk_wide_check(n, float(params["alpha"]), pts)
    return StepResult(
        {
            "edges": rep.edges,
            "proper": rep.proper,
            "wide": rep.wide,
            "analytic_margin": rep.analytic_margin,
        }
    )


def _op_circle_map(params: dict, ctx: Context) -> StepResult:
    import numpy as np

    rng = np.random.default_rng(int(params.get("seed", 0)))
    n = int(params["n"])
    pts = geom.sample_sphere(n - 1, int(params.get("points", 500)), rng)
    rep, col = geom.circle_map_pq_coloring(
        n, int(params["p"]), int(params["q"]), pts, float(params["alpha"])
    )
    return StepResult(
        {
            "edges": rep.edges,
            "verified": rep.verified,
            "violations": rep.violations,
            "min_edge_distance": rep.min_edge_distance,
            "margin": rep.margin,
        },
        graph=col.graph,
        coloring=col,
    )


OPS: dict[str, Callable[[dict, Context], StepResult]] = {
    "kneser": _op_build(fam.kneser),
    "schrijver": _op_build(fam.schrijver),
    "cycle": _op_build(fam.cycle),
    "complete": _op_build(fam.complete),
    "circular_complete": _op_build(fam.circular_complete),
    "wide_universal": _op_build(fam.wide_universal),
    "gen_mycielski": _op_gen_mycielski,
    "myc_tower": _op_myc_tower,
    "sg_interval_coloring": _op_sg_interval,
    "sg_refined_coloring": _op_sg_refined,
    "widen_to_local": _op_widen,
    "w_canonical_coloring": _op_w_canonical,
    "gmyc_direct_coloring": _op_gmyc_direct,
    "gmyc_wide_extension": _op_gmyc_wide_ext,
    "chi": _op_solve("chi"),
    "psi": _op_solve("psi"),
    "chi_f": _op_solve("chi_f"),
    "chi_c": _op_solve("chi_c"),
    "oddsch_pipeline": _op_pipeline,
    "hemisphere_check": _op_hemisphere,
    "cover_check": _op_cover,
    "borsuk_wide_check": _op_borsuk_wide,
    "circle_map_pq": _op_circle_map,
}


def _as_number(x):
    if isinstance(x, bool):
        return None
    if isinstance(x, (int, float)):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError):
            return None
    return None


def _check(expected: dict, actual) -> bool:
    tol = expected.get("tolerance", 0)
    if "equals" in expected:
        want = expected["equals"]
        na, nw = _as_number(actual), _as_number(want)
        if na is not None and nw is not None:
            return abs(Fraction(na) - Fraction(nw)) <= Fraction(tol) if tol else na == nw
        return actual == want
    ok = True
    na = _as_number(actual)
    if "max" in expected:
        ok = ok and na is not None and Fraction(na) <= Fraction(_as_number(expected["max"])) + Fraction(tol)
    if "min" in expected:
        ok = ok and na is not None and Fraction(na) >= Fraction(_as_number(expected["min"])) - Fraction(tol)
    return ok


@dataclass
class RecipeRun:
    name: str
    rows: list[dict[str, Any]] = field(default_factory=list)
    step_fields: dict[str, dict[str, Any]] = field(default_factory=dict)
    exit_code: int = EXIT_OK
    error: str | None = None


def run_recipe(
    path: str, artifacts_dir: str | None = None, figures: bool = False
) -> RecipeRun:
    """Execute a recipe file and compare results against its expectations.

    Exit code semantics: 0 all expectations met, 2 some expectation failed,
    3 a budget was exceeded (inexact result), 4 input/parse error.  Partial
    artifacts are retained on failure.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        return RecipeRun(name=str(path), exit_code=EXIT_INPUT, error=str(exc))

    run = RecipeRun(name=doc.get("name", os.path.basename(path)))
    ctx: Context = {}
    if artifacts_dir:
        os.makedirs(artifacts_dir, exist_ok=True)
    try:
        for step in doc.get("steps", []):
            sid = step["id"]
            op = step["op"]
            if op not in OPS:
                raise RecipeError(f"unknown op {op!r}")
            params = dict(step.get("params", {}))
            result = OPS[op](params, ctx)
            ctx[sid] = result
            run.step_fields[sid] = result.fields
            if artifacts_dir:
                dump_json(result.fields, os.path.join(artifacts_dir, f"{sid}.json"))
                if result.graph is not None:
                    dump_json(
                        graph_to_obj(result.graph),
                        os.path.join(artifacts_dir, f"{sid}.graph.json"),
                    )
                if result.coloring is not None:
                    dump_json(
                        coloring_to_obj(result.coloring),
                        os.path.join(artifacts_dir, f"{sid}.coloring.json"),
                    )
                if figures and result.coloring is not None and result.graph is not None:
                    from .report import profile_figure

                    if is_proper(result.graph, result.coloring):
                        profile_figure(
                            result.graph,
                            result.coloring,
                            os.path.join(artifacts_dir, f"{sid}.profile.png"),
                            title=sid,
                        )
    except BudgetExceeded as exc:
        run.exit_code = EXIT_BUDGET
        run.error = str(exc)
        return run
    except (RecipeError, ValueError, KeyError, TypeError) as exc:
        run.exit_code = EXIT_INPUT
        run.error = f"{type(exc).__name__}: {exc}"
        return run

    failed = 0
    for exp in doc.get("expected", []):
        qty = exp.get("quantity", "")
        sid, _, fieldname = qty.partition(".")
        if sid not in ctx or fieldname not in ctx[sid].fields:
            run.rows.append(
                {"quantity": qty, "expected": _expected_str(exp), "actual": "<missing>", "status": "fail"}
            )
            failed += 1
            continue
        actual = ctx[sid].fields[fieldname]
        ok = _check(exp, actual)
        run.rows.append(
            {
                "quantity": qty,
                "expected": _expected_str(exp),
                "actual": str(actual),
                "status": "pass" if ok else "fail",
            }
        )
        if not ok:
            failed += 1
    if failed:
        run.exit_code = EXIT_FAIL
    if artifacts_dir:
        from .report import expectations_figure, write_summary_csv

        write_summary_csv(run.rows, os.path.join(artifacts_dir, "summary.csv"))
        if figures and run.rows:
            expectations_figure(
                run.rows, os.path.join(artifacts_dir, "expectations.png"), title=run.name
            )
    return run


def _expected_str(exp: dict) -> str:
    parts = []
    for key in ("equals", "max", "min"):
        if key in exp:
            parts.append(f"{key}={exp[key]}")
    if exp.get("tolerance"):
        parts.append(f"tol={exp['tolerance']}")
    return " ".join(parts)
