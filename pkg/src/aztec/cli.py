"""Command-line entry point.

Subcommands: count, probs, sample, gf, render, oracle-check.  The input
source is exactly one of a region ("aztec:5", "grid:4", "hex:2,2,2",
"fortress:3:t=1/2:phase=0") or a weight-file path (a cell-grid JSON as
written by --out of count/probs, or any file ending in .json).

The default backend is exact rational arithmetic, escalating on its own
to the formal-infinitesimal backend when a zero cell factor appears;
--backend float64 is accepted for sample/render only.  Errors leave a
machine-readable JSON object on stderr and a nonzero exit status.
Randomized commands print the effective seed.
"""

from __future__ import annotations

import argparse
import json
import os
import random as _random
import sys
from fractions import Fraction

from . import regions as regionsmod
from .grid import CellGrid, Matching, all_ones, grid_from_json, grid_to_json, matching_from_json, matching_to_json
from .probs import ProbGrid, prob_sweep
from .reduction import ReductionTrace, count_matchings, reduce_trace_auto, trace_from_json, trace_to_json
from .render import render_matching, render_octic_overlay, render_prob_grid, render_tiling
from .scalars import EPS, EXACT, FLOAT64, PoleAtZero, ZeroCellFactor, ZeroWeight, format_scalar
from .series import assemble_P, series_to_json, solve_EFGH, solve_efgh
from .shuffle import RandomSource, sample


class CliError(Exception):
    pass


def _load_source(args) -> tuple[CellGrid, "regionsmod.Embedding | None"]:
    src = args.source
    if src.endswith(".json") or os.path.sep in src:
        with open(src) as fh:
            return grid_from_json(json.load(fh)), None
    spec = regionsmod.parse_region(src)
    if isinstance(spec, int):
        return all_ones(spec), None
    emb = regionsmod.build_embedding(spec)
    return emb.target, emb


def _backend(args, allow_float: bool) -> str:
    mode = {"exact": EXACT, "eps": EPS, "float64": FLOAT64}[args.backend]
    if mode == FLOAT64 and not allow_float:
        raise CliError("--backend float64 is only valid for sample/render")
    return mode


def _get_trace(args, grid: CellGrid, backend: str) -> ReductionTrace:
    if getattr(args, "trace", None):
        with open(args.trace) as fh:
            return trace_from_json(json.load(fh))
    trace = reduce_trace_auto(grid, backend)
    if getattr(args, "save_trace", None):
        with open(args.save_trace, "w") as fh:
            json.dump(trace_to_json(trace), fh)
    return trace


def _write(args, text: str) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _cmd_count(args) -> int:
    grid, emb = _load_source(args)
    backend = _backend(args, allow_float=False)
    total = count_matchings(grid, backend)
    if emb is not None:
        region_count = emb.prefactor * total
        _write(args, json.dumps({
            "matching_count": format_scalar(total),
            "prefactor": format_scalar(emb.prefactor),
            "region_count": format_scalar(region_count),
        }, indent=2) if args.format == "json" else format_scalar(region_count))
    else:
        _write(args, format_scalar(total))
    return 0


def _prob_report(pg: ProbGrid) -> dict:
    return {
        "order": pg.order,
        "probabilities": [
            {"r": e.r, "c": e.c, "slot": e.slot, "p": format_scalar(v)}
            for e, v in pg.items()
        ],
    }


def _cmd_probs(args) -> int:
    grid, _emb = _load_source(args)
    backend = _backend(args, allow_float=False)
    trace = _get_trace(args, grid, backend)
    pg = prob_sweep(trace)
    if args.format == "csv":
        lines = ["r,c,slot,p"]
        lines += [f"{e.r},{e.c},{e.slot},{format_scalar(v)}" for e, v in pg.items()]
        _write(args, "\n".join(lines) + "\n")
    elif args.format == "svg":
        _write(args, render_prob_grid(pg))
    else:
        _write(args, json.dumps(_prob_report(pg), indent=2))
    return 0


def _resolve_seed(args) -> int:
    seed = args.seed
    if seed is None:
        seed = _random.SystemRandom().getrandbits(48)
    print(f"seed: {seed}", file=sys.stderr)
    return seed


def _cmd_sample(args) -> int:
    grid, emb = _load_source(args)
    backend = _backend(args, allow_float=True)
    seed = _resolve_seed(args)
    trace = _get_trace(args, grid, backend)
    rng = RandomSource(seed)
    m = sample(trace, rng)
    if args.format == "svg":
        if emb is not None:
            tiling = regionsmod.lift_matching(m, emb, rng)
            svg = render_tiling(tiling, emb)
            if args.octic and isinstance(emb.spec, regionsmod.FortressSpec):
                svg = render_octic_overlay(svg, emb.target.order)
        else:
            svg = render_matching(m)
        _write(args, svg)
    else:
        payload = matching_to_json(m)
        payload["seed"] = seed
        if emb is not None:
            tiling = regionsmod.lift_matching(m, emb, rng)
            payload["tiling"] = [sorted(pair) for pair in sorted(tiling.edges, key=sorted)]
        _write(args, json.dumps(payload, indent=2))
    return 0


def _cmd_gf(args) -> int:
    t = Fraction(args.t)
    rates = solve_efgh(t, args.trunc)
    P = assemble_P(*solve_EFGH(rates, t, args.trunc))
    _write(args, json.dumps(series_to_json(P, t), indent=2))
    return 0


def _cmd_render(args) -> int:
    with open(args.matching) as fh:
        data = json.load(fh)
    m = matching_from_json(data)
    if args.source:
        _grid, emb = _load_source(args)
        if emb is not None:
            rng = RandomSource(args.seed if args.seed is not None else 0)
            tiling = regionsmod.lift_matching(m, emb, rng)
            svg = render_tiling(tiling, emb)
            if args.octic and isinstance(emb.spec, regionsmod.FortressSpec):
                svg = render_octic_overlay(svg, emb.target.order)
            _write(args, svg)
            return 0
    _write(args, render_matching(m))
    return 0


def _cmd_oracle_check(args) -> int:
    from .oracle import aztec_small_graph, check_condensation, oracle_count, oracle_edge_probs
    from .grid import all_edges, edge_vertices, grid_from_cells, CellWeights

    rng = _random.Random(args.seed if args.seed is not None else 20260301)
    failures = 0

    def report(name, ok):
        nonlocal failures
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
        failures += 0 if ok else 1

    for case in range(args.cases):
        n = rng.randint(1, 4)
        zero_frac = Fraction(1, 4) if case % 2 else Fraction(0)

        def wt():
            if zero_frac and rng.random() < float(zero_frac):
                return Fraction(0)
            return Fraction(rng.randint(1, 6), rng.randint(1, 4))

        g = grid_from_cells(n, lambda r, c: CellWeights(wt(), wt(), wt(), wt()))
        sg = aztec_small_graph(g)
        expect = oracle_count(sg)
        try:
            got = count_matchings(g)
        except PoleAtZero:
            got = Fraction(0)
        ok = got == expect
        if ok and expect != 0:
            pg = prob_sweep(reduce_trace_auto(g))
            probs = oracle_edge_probs(sg)
            for e in all_edges(n):
                u, v = sorted(edge_vertices(n, e))
                if pg.value(e) != probs[(u, v)]:
                    ok = False
                    break
        report(f"random diamond order {n} (zeros={bool(zero_frac)}) case {case}", ok)
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="aztec", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, source=True):
        if source:
            p.add_argument("source", help="region (aztec:n, grid:m, hex:a,b,c, fortress:n[:t=..][:phase=..]) or weight-file path")
        p.add_argument("--backend", choices=["exact", "eps", "float64"], default="exact")
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=["json", "svg", "csv", "text"], default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--trace", default=None, help="reuse a cached reduction trace")
        p.add_argument("--save-trace", default=None)

    p = sub.add_parser("count", help="weighted matching count (and region count)")
    common(p)
    p.set_defaults(fn=_cmd_count, format="text")

    p = sub.add_parser("probs", help="exact edge-inclusion probabilities")
    common(p)
    p.set_defaults(fn=_cmd_probs, format="json")

    p = sub.add_parser("sample", help="random matching / region tiling")
    common(p)
    p.add_argument("--octic", action="store_true", help="overlay the octic curve on fortress tilings")
    p.set_defaults(fn=_cmd_sample, format="json")

    p = sub.add_parser("gf", help="generating-function coefficient tables")
    common(p, source=False)
    p.add_argument("--t", default="1/2")
    p.add_argument("--trunc", type=int, default=10)
    p.set_defaults(fn=_cmd_gf, format="json")

    p = sub.add_parser("render", help="render a stored matching to SVG")
    common(p, source=False)
    p.add_argument("matching", help="matching JSON file from `sample`")
    p.add_argument("--region", dest="source", default=None, help="region to lift into before rendering")
    p.add_argument("--octic", action="store_true")
    p.set_defaults(fn=_cmd_render, format="svg")

    p = sub.add_parser("oracle-check", help="desk-scale equivalence suite vs. brute force")
    common(p, source=False)
    p.add_argument("--cases", type=int, default=20)
    p.set_defaults(fn=_cmd_oracle_check)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (PoleAtZero, ZeroCellFactor, ZeroWeight, CliError, ValueError, OSError) as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
