"""Command-line front end: build families, realize colorings, solve
invariants, verify saved artifacts, run sphere-geometry checks, and execute
declarative recipes with persistent artifacts.

Exit codes: 0 all expectations met, 2 an expectation or verification
failed, 3 a budget was exceeded (result inexact), 4 input error.
"""

from __future__ import annotations

import argparse
import json
import signal
import sys
from fractions import Fraction

from . import __version__
from . import constructions as cons
from . import families as fam
from . import geometry as geom
from . import solvers as sol
from .core import Coloring, Graph, is_proper, is_s_wide, local_profile, bits
from .io import (
    ParseError,
    coloring_from_obj,
    coloring_to_obj,
    dump_json,
    from_dimacs,
    graph_from_obj,
    graph_to_obj,
    hom_from_obj,
    load_json,
    to_dimacs,
)
from .recipe import EXIT_BUDGET, EXIT_FAIL, EXIT_INPUT, EXIT_OK, run_recipe
from .solvers import BudgetExceeded

__all__ = ["main"]


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x.strip())


def _load_graph(path: str) -> Graph:
    if path.endswith(".col") or path.endswith(".dimacs"):
        with open(path, encoding="utf-8") as fh:
            return from_dimacs(fh.read())
    return graph_from_obj(load_json(path))


def _save_graph(g: Graph, path: str, fmt: str | None) -> None:
    fmt = fmt or ("dimacs" if path.endswith(".col") else "json")
    if fmt == "dimacs":
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(to_dimacs(g))
    else:
        dump_json(graph_to_obj(g), path)


def _emit(payload: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(payload, sort_keys=True, default=str))
    else:
        for key, val in payload.items():
            print(f"{key}: {val}")


# ---------------------------------------------------------------------------
# subcommands


def cmd_build(args) -> int:
    if args.family == "kneser":
        g = fam.kneser(args.n, args.k)
    elif args.family == "schrijver":
        g = fam.schrijver(args.n, args.k)
    elif args.family == "cycle":
        g = fam.cycle(args.n)
    elif args.family == "complete":
        g = fam.complete(args.n)
    elif args.family == "circular":
        g = fam.circular_complete(args.p, args.q)
    elif args.family == "wide-universal":
        g = fam.wide_universal(args.s, args.t)
    elif args.family == "myc-tower":
        g = fam.gen_mycielski_iter(fam.complete(2), _ints(args.r)).graph
    else:
        raise ParseError(f"unknown family {args.family!r}")
    if args.out:
        _save_graph(g, args.out, args.format)
    _emit({"family": args.family, "vertices": g.n, "edges": g.m, "out": args.out}, args.json)
    return EXIT_OK


def _verification_payload(g: Graph, c: Coloring) -> dict:
    payload: dict = {"vertices": g.n, "colors_used": len(c.palette)}
    payload["proper"] = is_proper(g, c)
    if payload["proper"]:
        payload["max_plus_one"] = local_profile(g, c).max_plus_one
        for s in (1, 2, 3):
            payload[f"swide_{s}"] = is_s_wide(g, c, s)
    return payload


def cmd_color(args) -> int:
    if args.builder == "sg-interval":
        c = cons.sg_interval_coloring(args.n, args.k, _ints(args.sizes), rule=args.rule)
        if args.widen:
            c = cons.widen_to_local(c.graph, c)
    elif args.builder == "sg-refined":
        res = cons.sg_refined_coloring(args.n, args.k, args.m, _ints(args.sizes))
        c = res.coloring
        if not res.proper:
            payload = {"proper": False, "violating_edge": list(res.violating_edge)}
            _emit(payload, args.json)
            if args.out:
                dump_json(coloring_to_obj(c), args.out)
            return EXIT_FAIL
    elif args.builder == "w-canonical":
        c = cons.w_canonical_coloring(args.s, args.t)
    elif args.builder == "gmyc-direct":
        c = cons.gmyc_direct_coloring(_ints(args.r), refine_even_d=args.refine)
    else:
        raise ParseError(f"unknown builder {args.builder!r}")
    if args.out:
        dump_json(coloring_to_obj(c), args.out)
    if args.graph_out:
        _save_graph(c.graph, args.graph_out, None)
    payload = _verification_payload(c.graph, c)
    payload["out"] = args.out
    _emit(payload, args.json)
    return EXIT_OK if payload["proper"] else EXIT_FAIL


def cmd_solve(args) -> int:
    g = _load_graph(args.infile)
    limit = int(float(args.limit_nodes)) if args.limit_nodes else None
    if args.invariant == "chi":
        value, col = sol.chromatic_number(g, node_limit=limit)
        payload = {
            "invariant": "chi",
            "value": value,
            "exact": True,
            "certificate": coloring_to_obj(col)["colors"],
        }
        code = EXIT_OK
    elif args.invariant == "psi":
        res = sol.local_chromatic(g, node_limit=limit or 20_000_000)
        payload = {
            "invariant": "psi",
            "value": res.value,
            "exact": res.exact,
            "lower": res.lower,
            "upper": res.upper,
        }
        if res.classes is not None:
            payload["certificate"] = coloring_to_obj(res.coloring(g))["colors"]
        code = EXIT_OK if res.exact else EXIT_BUDGET
    elif args.invariant == "chi-f":
        value, weights = sol.fractional_chromatic(g)
        payload = {
            "invariant": "chi_f",
            "value": str(value),
            "exact": True,
            "certificate": [
                {"set": [g.labels[v] for v in bits(mask)], "weight": str(w)}
                for mask, w in sorted(weights.items())
            ],
        }
        code = EXIT_OK
    elif args.invariant == "chi-c":
        res = sol.circular_chromatic(g, node_limit=limit)
        payload = {
            "invariant": "chi_c",
            "value": str(res.value),
            "p": res.p,
            "q": res.q,
            "exact": res.exact,
            "certificate": coloring_to_obj(res.coloring)["colors"],
        }
        code = EXIT_OK if res.exact else EXIT_BUDGET
    else:
        raise ParseError(f"unknown invariant {args.invariant!r}")
    if args.out:
        dump_json(payload, args.out)
    _emit(payload, args.json)
    return code


def cmd_verify(args) -> int:
    if args.kind == "coloring":
        g = _load_graph(args.graph)
        c = coloring_from_obj(load_json(args.coloring), g)
        payload = _verification_payload(g, c)
        ok = payload["proper"]
        if args.swide and ok:
            ok = is_s_wide(g, c, args.swide)
            payload[f"swide_{args.swide}"] = ok
        _emit(payload, args.json)
        return EXIT_OK if ok else EXIT_FAIL
    if args.kind == "hom":
        src = _load_graph(args.source)
        tgt = _load_graph(args.target)
        mapping = hom_from_obj(load_json(args.mapfile), src, tgt)
        try:
            cons.Homomorphism.checked(src, tgt, mapping)
            _emit({"edge_preserving": True}, args.json)
            return EXIT_OK
        except ValueError as exc:
            _emit({"edge_preserving": False, "reason": str(exc)}, args.json)
            return EXIT_FAIL
    raise ParseError(f"unknown verify kind {args.kind!r}")


def cmd_geom(args) -> int:
    import numpy as np

    if args.kind == "hemisphere":
        rep = geom.hemisphere_stable_check(args.n, args.k, args.samples, args.seed)
        payload = {
            "n": rep.n,
            "k": rep.k,
            "samples": rep.samples,
            "failures": rep.failures,
            "min_margin": rep.min_margin,
        }
        _emit(payload, args.json)
        return EXIT_OK if rep.ok else EXIT_FAIL
    if args.kind == "cover":
        cov = geom.cover_plus(args.k) if args.plus else geom.simplex_cover(args.k)
        rep = geom.verify_cover(cov, args.samples, args.seed)
        mult_bound = (args.k + 3 + 1) // 2 if args.plus else (args.k + 1 + 1) // 2
        either_bound = args.k + 2 if args.plus else args.k + 1
        payload = {
            "k": rep.k,
            "sets": rep.sets,
            "samples": rep.samples,
            "coverage": rep.coverage,
            "max_multiplicity": rep.max_multiplicity,
            "antipodal_conflicts": rep.antipodal_conflicts,
            "max_either_or": rep.max_either_or,
            "delta": cov.delta,
        }
        _emit(payload, args.json)
        return EXIT_OK if rep.ok(mult_bound, either_bound) else EXIT_FAIL
    if args.kind == "borsuk":
        rng = np.random.default_rng(args.seed)
        pts = geom.sample_sphere(args.n - 1, args.points, rng)
        rep = geom.borsuk_wide_check(args.n, args.alpha, pts)
        payload = {
            "n": rep.n,
            "alpha": rep.alpha,
            "points": rep.points,
            "edges": rep.edges,
            "analytic_margin": rep.analytic_margin,
            "proper": rep.proper,
            "wide": rep.wide,
        }
        _emit(payload, args.json)
        return EXIT_OK if rep.ok else EXIT_FAIL
    if args.kind == "circlemap":
        rng = np.random.default_rng(args.seed)
        pts = geom.sample_sphere(args.n - 1, args.points, rng)
        rep, col = geom.circle_map_pq_coloring(args.n, args.p, args.q, pts, args.alpha)
        payload = {
            "n": rep.n,
            "p": rep.p,
            "q": rep.q,
            "alpha": rep.alpha,
            "edges": rep.edges,
            "verified": rep.verified,
            "violations": rep.violations,
            "min_edge_distance": rep.min_edge_distance,
            "margin": rep.margin,
        }
        if args.figures:
            from .report import circle_map_figure, ensure_dir

            ensure_dir(args.figures)
            g_vals = geom.circle_map(args.n, pts)
            circle_map_figure(
                g_vals,
                list(col.colors),
                args.p,
                f"{args.figures}/circlemap_n{args.n}_{args.p}_{args.q}.png",
            )
        _emit(payload, args.json)
        return EXIT_OK if rep.verified else EXIT_FAIL
    raise ParseError(f"unknown geom kind {args.kind!r}")


def cmd_export(args) -> int:
    g = _load_graph(args.infile)
    _save_graph(g, args.out, args.format)
    _emit({"vertices": g.n, "edges": g.m, "out": args.out}, args.json)
    return EXIT_OK


def cmd_recipe(args) -> int:
    run = run_recipe(args.path, artifacts_dir=args.artifacts, figures=args.figures)
    payload = {
        "name": run.name,
        "exit_code": run.exit_code,
        "error": run.error,
        "steps": run.step_fields,
        "expectations": run.rows,
    }
    if args.json:
        print(json.dumps(payload, sort_keys=True, default=str))
    else:
        if run.error:
            print(f"error: {run.error}")
        for row in run.rows:
            print(
                f"[{row['status'].upper():4}] {row['quantity']}: "
                f"expected {row['expected']}, got {row['actual']}"
            )
    return run.exit_code


def cmd_report(args) -> int:
    from .report import ensure_dir, palette_figure, profile_figure, write_summary_csv

    g = _load_graph(args.graph)
    c = coloring_from_obj(load_json(args.coloring), g)
    outdir = ensure_dir(args.out)
    payload = _verification_payload(g, c)
    rows = [{"quantity": k, "expected": "", "actual": v, "status": ""} for k, v in payload.items()]
    write_summary_csv(rows, f"{outdir}/summary.csv")
    if payload["proper"]:
        profile_figure(g, c, f"{outdir}/profile.png")
    palette_figure(c, f"{outdir}/palette.png")
    _emit(payload, args.json)
    return EXIT_OK if payload["proper"] else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser


def build_parser() -> _Parser:
    p = _Parser(prog="topochrom", description=__doc__)
    p.add_argument("--version", action="version", version=f"topochrom {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("--budget-seconds", type=float, default=None)

    b = sub.add_parser("build", help="construct a graph family")
    b.add_argument("family", choices=["kneser", "schrijver", "cycle", "complete", "circular", "wide-universal", "myc-tower"])
    b.add_argument("--n", type=int)
    b.add_argument("--k", type=int)
    b.add_argument("--p", type=int)
    b.add_argument("--q", type=int)
    b.add_argument("--s", type=int)
    b.add_argument("--t", type=int)
    b.add_argument("--r", type=str, help="comma-separated level caps")
    b.add_argument("-o", "--out")
    b.add_argument("--format", choices=["json", "dimacs"])
    common(b)
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("color", help="build and verify an explicit coloring")
    c.add_argument("builder", choices=["sg-interval", "sg-refined", "w-canonical", "gmyc-direct"])
    c.add_argument("--n", type=int)
    c.add_argument("--k", type=int)
    c.add_argument("--m", type=int, default=0)
    c.add_argument("--sizes", type=str)
    c.add_argument("--rule", choices=["any-majority", "smallest-anchor"], default="any-majority")
    c.add_argument("--widen", action="store_true")
    c.add_argument("--s", type=int)
    c.add_argument("--t", type=int)
    c.add_argument("--r", type=str)
    c.add_argument("--refine", action="store_true")
    c.add_argument("-o", "--out")
    c.add_argument("--graph-out")
    common(c)
    c.set_defaults(func=cmd_color)

    s = sub.add_parser("solve", help="compute an invariant exactly")
    s.add_argument("invariant", choices=["chi", "psi", "chi-f", "chi-c"])
    s.add_argument("--in", dest="infile", required=True)
    s.add_argument("--limit-nodes", type=str, default=None)
    s.add_argument("-o", "--out")
    common(s)
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="re-check a saved coloring or homomorphism")
    v.add_argument("kind", choices=["coloring", "hom"])
    v.add_argument("--graph")
    v.add_argument("--coloring")
    v.add_argument("--swide", type=int, default=None)
    v.add_argument("--source")
    v.add_argument("--target")
    v.add_argument("--map", dest="mapfile")
    common(v)
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("geom", help="sampled sphere-geometry certification")
    g.add_argument("kind", choices=["hemisphere", "cover", "borsuk", "circlemap"])
    g.add_argument("--n", type=int)
    g.add_argument("--k", type=int)
    g.add_argument("--p", type=int)
    g.add_argument("--q", type=int)
    g.add_argument("--plus", action="store_true")
    g.add_argument("--alpha", type=float)
    g.add_argument("--samples", type=int, default=100_000)
    g.add_argument("--points", type=int, default=2000)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--figures", help="directory for rendered figures")
    common(g)
    g.set_defaults(func=cmd_geom)

    e = sub.add_parser("export", help="convert between JSON and DIMACS")
    e.add_argument("--in", dest="infile", required=True)
    e.add_argument("--format", choices=["json", "dimacs"], required=True)
    e.add_argument("-o", "--out", required=True)
    common(e)
    e.set_defaults(func=cmd_export)

    r = sub.add_parser("recipe", help="run a declarative experiment recipe")
    r.add_argument("path")
    r.add_argument("--artifacts", help="directory for per-step JSON artifacts")
    r.add_argument("--figures", action="store_true", help="render figures into the artifacts directory")
    common(r)
    r.set_defaults(func=cmd_recipe)

    rep = sub.add_parser("report", help="CSV + figures for a saved coloring")
    rep.add_argument("--graph", required=True)
    rep.add_argument("--coloring", required=True)
    rep.add_argument("-o", "--out", required=True)
    common(rep)
    rep.set_defaults(func=cmd_report)

    return p


def _alarm_handler(signum, frame):
    raise BudgetExceeded("wall-clock budget exceeded")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    seconds = getattr(args, "budget_seconds", None)
    if seconds:
        signal.signal(signal.SIGALRM, _alarm_handler)
        signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (OSError, ParseError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    finally:
        if seconds:
            signal.setitimer(signal.ITIMER_REAL, 0)


if __name__ == "__main__":
    sys.exit(main())
