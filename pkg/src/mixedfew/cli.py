"""Command-line entry point.

Exit codes: 0 on success, 1 on usage or input errors, 2 when a verification
fails (a bound is exceeded, the Gale counts disagree, a multidegree or an
inequality check fails).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from . import __version__
from .bounds import best_bound, bounds_table_rows, estimation_chain_holds, verify_inequalities
from .gale import build_gale_system, normalize_to_z
from .jacobian import JacobianBudgetError, random_detdeg_suite
from .lattice import RankDeficient, lattice_index
from .solver import SolverBudgetError, SolverOptions, solve_real, verify_gale_bijection
from .sparse_system import (InvalidSystem, _format_rational, detect_mixed_structure,
                            eliminate_binomials, normalize_constant_terms, parse_system)

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2


class UsageError(Exception):
    pass


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return _format_rational(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def _flatten(obj, prefix: str = ""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, obj


def render(report: dict, fmt: str) -> str:
    report = _jsonable(report)
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2)
    rows = list(_flatten(report))
    width = max((len(k) for k, _ in rows), default=0)
    lines = [f"mixedfew {__version__}"]
    lines += [f"{k.ljust(width)}  {json.dumps(v) if not isinstance(v, str) else v}" for k, v in rows]
    return "\n".join(lines)


def parse_blocks(text: str) -> List[int]:
    try:
        blocks = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"--blocks expects comma-separated integers, got {text!r}") from None
    if not blocks or any(b < 1 for b in blocks):
        raise UsageError("--blocks entries must be positive")
    return blocks


def _read_system(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except FileNotFoundError:
        raise UsageError(f"file not found: {path}") from None
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    return parse_system(text)


def load_structure(path: str):
    """Mixed structure of the system in ``path`` and the number of binomials removed."""
    sys_ = normalize_constant_terms(_read_system(path))
    removed = 0
    while sys_.ambient_n > 1 and any(len(p) == 2 for p in sys_.polys):
        sys_ = normalize_constant_terms(eliminate_binomials(sys_))
        removed += 1
    return detect_mixed_structure(sys_), removed


def _solver_options(args, **extra) -> SolverOptions:
    return SolverOptions(box=args.box, degree_cap=args.degree_cap, **extra)


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_analyze(args) -> tuple:
    ms, removed = load_structure(args.file)
    index = lattice_index(ms.exponent_matrix())
    # after eliminating binomials only positive solutions correspond
    bounds = best_bound(ms, index if not removed else None)
    report = {
        "structure": {"n": ms.n, "blocks": list(ms.block_sizes), "l": ms.l,
                      "lattice_index": index, "odd_index": index % 2 == 1,
                      "binomials_eliminated": removed},
        "bounds": bounds.to_dict(),
    }
    failed = False
    if args.count:
        sols = solve_real(ms.to_system(), _solver_options(args))
        counts = {"positive": sols.count_positive(), "suspects": len(sols.suspects)}
        failed = counts["positive"] > bounds.operative_positive
        if bounds.operative_real is not None:
            counts["real"] = sols.count_real()
            failed = failed or counts["real"] > bounds.operative_real
        counts["within_bounds"] = not failed
        report["counts"] = counts
    return report, failed


def cmd_gale(args) -> tuple:
    ms, removed = load_structure(args.file)
    gs = build_gale_system(ms)
    mfs, zmap = normalize_to_z(gs)
    report = gs.to_dict()
    report["binomials_eliminated"] = removed
    report["master"] = {"d": [_format_rational(v) for v in mfs.d],
                        "z_scale": [_format_rational(v) for v in zmap.scale]}
    return report, False


def cmd_bounds_table(args) -> str:
    if args.n < 1 or args.lmax < args.n:
        raise UsageError("need 1 <= n <= lmax")
    rows = bounds_table_rows(args.n, args.lmax)
    buf = io.StringIO()
    fields = ["n", "blocks", "khovanskii", "bs07", "bbs", "mixed_pos", "mixed_real", "ratio"]
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({**row, "blocks": " ".join(map(str, row["blocks"]))})
    return buf.getvalue().rstrip("\n")


def cmd_count(args) -> tuple:
    sys_ = _read_system(args.file)
    sols = solve_real(sys_, _solver_options(args, positive_only=args.mode == "positive"))
    report = {"box": args.box, "seed": args.seed, "suspects": [s.to_dict() for s in sols.suspects]}
    pts = sols.nondegenerate
    if args.mode == "positive":
        pts = [p for p in pts if p.positive]
    if args.mode in ("positive", "both"):
        report["count_positive"] = sols.count_positive()
    if args.mode in ("real", "both"):
        report["count_real"] = sols.count_real()
    report["points"] = [p.to_dict() for p in pts]
    return report, False


def cmd_verify_gale(args) -> tuple:
    ms, removed = load_structure(args.file)
    if removed:
        raise UsageError("verify-gale needs a system without binomial equations")
    rep = verify_gale_bijection(ms, _solver_options(args))
    return rep.to_dict(), not rep.ok


def cmd_verify_jacobian(args) -> tuple:
    blocks = parse_blocks(args.blocks)
    rep = random_detdeg_suite(len(blocks), blocks, args.trials, args.seed)
    return rep.to_dict(), not rep.ok


def cmd_verify_inequalities(args) -> tuple:
    blocks = parse_blocks(args.blocks)
    if len(blocks) < 2:
        raise UsageError("need at least two blocks")
    rep = verify_inequalities(blocks)
    report = rep.to_dict()
    report["chain_real"] = estimation_chain_holds(blocks, per_chamber=False)
    report["chain_chamber"] = estimation_chain_holds(blocks, per_chamber=True)
    ok = rep.ok and report["chain_real"] and report["chain_chamber"]
    report["ok"] = ok
    return report, not ok


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mixedfew", description="Bounds, Gale duality and root counts for mixed fewnomial systems.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_format(p):
        p.add_argument("--format", choices=("json", "table"), default="json")
        return p

    def with_solver(p):
        p.add_argument("--box", type=float, default=SolverOptions.box,
                       help="half-width of the search box in log|x| coordinates")
        p.add_argument("--degree-cap", type=int, default=SolverOptions.degree_cap)
        p.add_argument("--seed", type=int, default=0, help="recorded for reproducibility")
        return p

    p = with_solver(with_format(sub.add_parser("analyze", help="structure, lattice index and bounds")))
    p.add_argument("file")
    p.add_argument("--count", action="store_true", help="also count solutions with the solver")
    p.set_defaults(func=cmd_analyze)

    p = with_format(sub.add_parser("gale", help="Gale dual system and master function constants"))
    p.add_argument("file")
    p.set_defaults(func=cmd_gale)

    p = sub.add_parser("bounds-table", help="CSV table of bounds over block compositions")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lmax", type=int, required=True)
    p.set_defaults(func=cmd_bounds_table)

    p = with_solver(with_format(sub.add_parser("count", help="count real solutions")))
    p.add_argument("file")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--positive", dest="mode", action="store_const", const="positive")
    mode.add_argument("--real", dest="mode", action="store_const", const="real")
    p.set_defaults(func=cmd_count, mode="both")

    p = with_solver(with_format(sub.add_parser("verify-gale", help="compare solution counts with the Gale dual")))
    p.add_argument("file")
    p.set_defaults(func=cmd_verify_gale)

    p = with_format(sub.add_parser("verify-jacobian", help="random Jacobian multidegree checks"))
    p.add_argument("--blocks", required=True, help="block sizes, e.g. 1,1,1")
    p.add_argument("--trials", type=int, default=25)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify_jacobian)

    p = with_format(sub.add_parser("verify-inequalities", help="exact checks of the a_k estimates"))
    p.add_argument("--blocks", required=True, help="block sizes, e.g. 1,1,1")
    p.set_defaults(func=cmd_verify_inequalities)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        result = args.func(args)
    except (UsageError, InvalidSystem, RankDeficient, SolverBudgetError, JacobianBudgetError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if isinstance(result, str):
        print(result)
        return EXIT_OK
    report, failed = result
    print(render(report, getattr(args, "format", "json")))
    return EXIT_FAILED if failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
