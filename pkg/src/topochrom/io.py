"""DIMACS .col and JSON serialization for graphs, colorings, homomorphisms.

JSON keeps vertex labels; DIMACS keeps only 1-based indices.  Round trips
preserve vertex count, edge set, and (for JSON) labels.
"""

from __future__ import annotations

import json
from typing import Any

from .core import Coloring, Graph

__all__ = [
    "ParseError",
    "to_dimacs",
    "from_dimacs",
    "graph_to_obj",
    "graph_from_obj",
    "coloring_to_obj",
    "coloring_from_obj",
    "hom_to_obj",
    "hom_from_obj",
    "dump_json",
    "load_json",
]


class ParseError(ValueError):
    """Malformed graph/coloring file; carries a 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def to_dimacs(g: Graph) -> str:
    lines = [f"p edge {g.n} {g.m}"]
    lines += [f"e {u + 1} {v + 1}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def from_dimacs(text: str) -> Graph:
    n = None
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] not in ("edge", "col", "edges"):
                raise ParseError(f"bad problem line {line!r}", lineno)
            try:
                n = int(parts[2])
            except ValueError:
                raise ParseError(f"bad vertex count in {line!r}", lineno) from None
        elif parts[0] == "e":
            if n is None:
                raise ParseError("edge line before problem line", lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
            except (ValueError, IndexError):
                raise ParseError(f"bad edge line {line!r}", lineno) from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise ParseError(f"edge ({u},{v}) out of range 1..{n}", lineno)
            if u == v:
                raise ParseError(f"loop edge ({u},{v}) rejected", lineno)
            edges.append((u - 1, v - 1))
        else:
            raise ParseError(f"unrecognized line {line!r}", lineno)
    if n is None:
        raise ParseError("missing problem line 'p edge n m'")
    return Graph.from_edges([str(i + 1) for i in range(n)], edges)


def graph_to_obj(g: Graph) -> dict[str, Any]:
    return {
        "vertices": list(g.labels),
        "edges": [[u, v] for u, v in g.edges()],
    }


def graph_from_obj(obj: dict[str, Any]) -> Graph:
    try:
        labels = obj["vertices"]
        edges = [(int(u), int(v)) for u, v in obj["edges"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad graph object: {exc}") from None
    return Graph.from_edges(labels, edges)


def coloring_to_obj(c: Coloring) -> dict[str, Any]:
    return {"colors": {lab: c.colors[i] for i, lab in enumerate(c.graph.labels)}}


def coloring_from_obj(obj: dict[str, Any], g: Graph) -> Coloring:
    try:
        table = obj["colors"]
    except (KeyError, TypeError):
        raise ParseError("bad coloring object: missing 'colors'") from None
    missing = [lab for lab in g.labels if lab not in table]
    if missing:
        raise ParseError(f"coloring misses vertex {missing[0]!r}")
    return Coloring(g, tuple(int(table[lab]) for lab in g.labels))


def hom_to_obj(source: Graph, target: Graph, mapping: dict[int, int]) -> dict[str, Any]:
    return {"map": {source.labels[u]: target.labels[mapping[u]] for u in range(source.n)}}


def hom_from_obj(obj: dict[str, Any], source: Graph, target: Graph) -> dict[int, int]:
    try:
        table = obj["map"]
    except (KeyError, TypeError):
        raise ParseError("bad homomorphism object: missing 'map'") from None
    out = {}
    for lab, tlab in table.items():
        out[source.index_of(lab)] = target.index_of(str(tlab))
    missing = [lab for lab in source.labels if source.index_of(lab) not in out]
    if missing:
        raise ParseError(f"homomorphism misses vertex {missing[0]!r}")
    return out


def dump_json(obj: Any, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_json(path: str) -> Any:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
