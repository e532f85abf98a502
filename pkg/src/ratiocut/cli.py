"""Command-line entry point: ``ratiocut <subcommand> ...``.

Exit codes: 0 success, 1 infeasible or undefined problem, 2 usage or input errors.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .constructions import Densest, NormalizedCut, NormalizedCutPrime, RatioRegions
from .errors import InstanceTooLargeError, RatioCutError
from .graph import GraphError, format_rational
from .io import ParseError, breakpoints_csv, grid_graph, mask_pgm, parse_graph, parse_pgm
from .oracle import brute_force_ratio
from .solver import count_seed_pairs, nested_solutions, solve, solve_auto_seeds

PAIR_CONFIRM_LIMIT = 10_000
METHOD_NAMES = {"dinkelbach": "dinkelbach", "breakpoints": "breakpoints", "bisect": "binary_search"}
PROBLEMS = ("ncut", "ncut-prime", "rr", "densest")


class UsageError(Exception):
    pass


def _edge(text: str) -> tuple[int, int]:
    try:
        i, j = (int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'i,j', got {text!r}") from None
    return i, j


def _budget(text: str):
    if text == "all":
        return None
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected a positive count or 'all'") from None
    if n < 1:
        raise argparse.ArgumentTypeError("expected a positive count or 'all'")
    return n


def _common(p: argparse.ArgumentParser, problem_flag: bool = False) -> None:
    if problem_flag:
        p.add_argument("--problem", choices=PROBLEMS, default="ncut")
    p.add_argument("--graph", type=Path, help="graph text file")
    p.add_argument("--image", type=Path, help="PGM image (P2 or P5)")
    p.add_argument("--sigma", type=Fraction, default=Fraction(32))
    p.add_argument("--neighborhood", type=int, choices=(4, 8), default=4)
    p.add_argument("--seed-in", type=_edge, metavar="I,J")
    p.add_argument("--seed-out", type=_edge, metavar="I,J")
    p.add_argument("--source", type=int)
    p.add_argument("--sink", type=int)
    p.add_argument("--auto-seeds", type=_budget, metavar="N|all", default=False)
    p.add_argument("--yes", action="store_true", help="confirm very large seed enumerations")
    p.add_argument("--minimize", action="store_true", help="densest: minimise instead")
    p.add_argument("--quiet", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ratiocut", description="Exact ratio partitioning by parametric minimum cut."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in PROBLEMS:
        p = sub.add_parser(name)
        _common(p)
        p.add_argument("--method", choices=tuple(METHOD_NAMES), default=None)
        p.add_argument("--mask", type=Path, help="write P5 mask of the optimal set")
        p.add_argument("--csv", type=Path, help="write the breakpoint table")
        p.add_argument("--jobs", type=int, default=1)
    p = sub.add_parser("breakpoints", help="print the nested solution table")
    _common(p, problem_flag=True)
    p.add_argument("--csv", type=Path, help="output path (default stdout)")
    p = sub.add_parser("oracle", help="brute-force optimum by subset enumeration")
    _common(p, problem_flag=True)
    p.add_argument("--limit", type=int, default=20)
    return parser


def _load(args):
    if (args.graph is None) == (args.image is None):
        raise UsageError("exactly one input: give --graph or --image")
    if args.graph is not None:
        return parse_graph(args.graph.read_text()), None
    img = parse_pgm(args.image.read_bytes())
    return grid_graph(img, args.sigma, args.neighborhood), img


def _kind(problem: str, args):
    edge_seeds = args.seed_in is not None or args.seed_out is not None
    node_seeds = args.source is not None or args.sink is not None
    auto = args.auto_seeds is not False
    if problem == "densest":
        if edge_seeds or node_seeds or auto:
            raise UsageError("densest takes no seeds")
        return Densest("minimize" if args.minimize else "maximize")
    if args.minimize:
        raise UsageError("--minimize only applies to densest")
    if problem in ("ncut", "ncut-prime"):
        if node_seeds:
            raise UsageError("use --seed-in/--seed-out for normalized cut")
        cls = NormalizedCut if problem == "ncut" else NormalizedCutPrime
        if not auto and (args.seed_in is None or args.seed_out is None):
            raise UsageError("give --seed-in and --seed-out, or --auto-seeds")
        return cls(args.seed_in, args.seed_out)
    if edge_seeds:
        raise UsageError("use --source/--sink for ratio regions")
    if not auto and (args.source is None or args.sink is None):
        raise UsageError("give --source and --sink, or --auto-seeds")
    return RatioRegions(args.source, args.sink)


def _check_auto(g, kind, args, err) -> None:
    total = count_seed_pairs(g, kind)
    budget = args.auto_seeds
    pairs = total if budget is None else min(budget, total)
    if not args.quiet:
        print(f"enumerating {pairs} seed pairs (one parametric cut each)", file=err)
    if pairs > PAIR_CONFIRM_LIMIT and not args.yes:
        raise UsageError(f"{pairs} seed pairs exceeds {PAIR_CONFIRM_LIMIT}; pass --yes to proceed")


def _run_solve(args, out, err) -> int:
    g, img = _load(args)
    if args.mask is not None and img is None:
        raise UsageError("--mask needs an --image input")
    kind = _kind(args.command, args)
    method = METHOD_NAMES[args.method] if args.method else (
        "breakpoints" if args.csv is not None else "dinkelbach"
    )
    if args.auto_seeds is not False:
        _check_auto(g, kind, args, err)
        sol = solve_auto_seeds(g, kind, args.auto_seeds, method, jobs=args.jobs)
    else:
        sol = solve(g, kind, method)
    print(
        f"ratio={format_rational(sol.ratio)} lambda*={format_rational(sol.lambda_star)} "
        f"|S|={len(sol.optimal_set)}",
        file=out,
    )
    if not args.quiet:
        print("S=" + " ".join(str(v) for v in sorted(sol.optimal_set)), file=out)
    if args.mask is not None:
        args.mask.write_bytes(mask_pgm(sol.optimal_set, img.width, img.height))
    if args.csv is not None:
        args.csv.write_text(breakpoints_csv(sol.nested))
    return 0


def _run_breakpoints(args, out, err) -> int:
    g, _ = _load(args)
    kind = _kind(args.problem, args)
    if args.auto_seeds is not False:
        raise UsageError("breakpoints needs explicit seeds")
    text = breakpoints_csv(nested_solutions(g, kind))
    if args.csv is not None:
        args.csv.write_text(text)
    else:
        out.write(text)
    return 0


def _run_oracle(args, out, err) -> int:
    g, _ = _load(args)
    if args.auto_seeds is not False:
        raise UsageError("the oracle enumerates subsets directly; omit --auto-seeds")
    if args.problem in ("ncut", "ncut-prime"):
        cls = NormalizedCut if args.problem == "ncut" else NormalizedCutPrime
        kind = cls(args.seed_in, args.seed_out)
    elif args.problem == "rr":
        kind = RatioRegions(args.source, args.sink)
    else:
        kind = Densest("minimize" if args.minimize else "maximize")
    res = brute_force_ratio(g, kind, args.limit)
    print(f"ratio={format_rational(res.best_ratio)} |S|={len(res.best_set)} evaluated={res.evaluated_count}", file=out)
    if not args.quiet:
        print("S=" + " ".join(str(v) for v in sorted(res.best_set)), file=out)
    return 0


def run(argv: Optional[list[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "breakpoints":
            return _run_breakpoints(args, out, err)
        if args.command == "oracle":
            return _run_oracle(args, out, err)
        return _run_solve(args, out, err)
    except (UsageError, ParseError, GraphError, InstanceTooLargeError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return 2
    except (RatioCutError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return 1


def main() -> None:
    sys.exit(run())
