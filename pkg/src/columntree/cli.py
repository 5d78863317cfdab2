"""Command-line frontend.

Subcommands: ``solve`` (run a solver on an instance file), ``oracle``
(brute-force optimum, guarded by a search-space estimate), ``generate``
(gadget / random / adversarial instances), ``bench`` (CSV timing rows).

Exit codes: 0 success, 1 invalid input or flags, 2 infeasible request
or a guard refusing the work, 3 I/O failure. Same flags, same inputs,
same seed give byte-identical outputs; ``bench --no-timing`` blanks
the one nondeterministic column.
"""

from __future__ import annotations

import argparse
import csv
import io as _stdio
import os
import sys
import time
from typing import Callable, Optional, Sequence

from .arrangement import (
    MAX_VARIABLE_COLUMNS,
    ComponentTooLargeError,
    SolveMode,
    TooManyColumnsError,
    solve_v2,
    solve_variable_column_order,
)
from .crossings import (
    InfeasibleVariantError,
    InvalidEmbeddingError,
    SearchSpaceError,
    brute_force_optimum,
    check_validity,
    crossing_points,
)
from .embedder import DegreeLimitError, solve_v1
from .gadgets import (
    GadgetFlavor,
    RandomParams,
    adversarial_v3_instance,
    fas_to_columntree,
    parse_digraph,
    random_instance,
)
from .io import ParseError, parse_instance, serialize_embedding, serialize_instance
from .model import Variant, validate
from .render import assign_coordinates, emit_svg
from .v3heur import solve_v3_greedy

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_INFEASIBLE = 2
EXIT_IO = 3

_VARIANTS = {"v1": Variant.V1, "v2": Variant.V2, "v3": Variant.V3}
_FLAVORS = {
    "v1": GadgetFlavor.V1_UNBOUNDED,
    "v1-unbounded": GadgetFlavor.V1_UNBOUNDED,
    "v2v3": GadgetFlavor.V2V3_BINARY,
    "v2v3-binary": GadgetFlavor.V2V3_BINARY,
}


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems through our exit codes."""

    def error(self, message: str):  # noqa: A003 - argparse API
        raise CliError(EXIT_INVALID, f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="columntree", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add_instance_flags(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("instance", help="instance JSON path ('-' for stdin)")
        sp.add_argument(
            "--variant", required=True, choices=sorted(_VARIANTS), help="drawing convention"
        )
        sp.add_argument(
            "--column-order",
            choices=("fixed", "variable"),
            default="fixed",
            help=f"optimize the column permutation too (at most {MAX_VARIABLE_COLUMNS} columns)",
        )
        sp.add_argument("--jobs", type=int, default=1, help="worker cap; solvers currently use one process")
        sp.add_argument("--out", help="write the embedding JSON here instead of stdout")
        sp.add_argument("--svg", help="also render the drawing to this SVG path")
        sp.add_argument("--scale", type=int, default=16, help="SVG pixels per grid unit")
        sp.add_argument("--mark-crossings", action="store_true", help="draw a dot at every crossing")
        sp.add_argument(
            "--strip-colors",
            default=None,
            help="comma-separated alternating column background colors",
        )

    sp = sub.add_parser("solve", help="run a solver and emit the embedding")
    add_instance_flags(sp)
    sp.add_argument(
        "--mode",
        choices=("exact", "heuristic"),
        default=None,
        help="arrangement solver; defaults to exact (v1/v2) or heuristic (v3)",
    )
    sp.add_argument(
        "--compare",
        action="store_true",
        help="with --variant v2 --mode heuristic: also report the exact optimum and gap",
    )

    sp = sub.add_parser("oracle", help="brute-force optimum (guarded)")
    add_instance_flags(sp)
    sp.add_argument(
        "--space-limit",
        type=int,
        default=10_000_000,
        help="refuse above this many estimated evaluations",
    )

    gen = sub.add_parser("generate", help="write an instance JSON")
    gsub = gen.add_subparsers(dest="generator", required=True)

    gg = gsub.add_parser("gadget", help="hardness gadget from a digraph edge list")
    gg.add_argument("--flavor", required=True, choices=sorted(_FLAVORS), help="gadget family")
    gg.add_argument("--edges", required=True, help="edge-list file, one 'u v' per line ('-' for stdin)")
    gg.add_argument("--out", help="output path (default stdout)")

    gr = gsub.add_parser("random", help="seeded random valid instance")
    gr.add_argument("--n", type=int, required=True, help="vertex count")
    gr.add_argument("--columns", type=int, required=True, help="column count (>= 2)")
    gr.add_argument("--max-degree", type=int, default=3, help="child cap per vertex")
    gr.add_argument("--seed", type=int, default=0, help="RNG seed (COLTREE_SEED overrides)")
    gr.add_argument("--out", help="output path (default stdout)")

    ga = gsub.add_parser("adversarial", help="family where the greedy pays linearly more")
    ga.add_argument("--x", type=int, required=True, help="family parameter (>= 3)")
    ga.add_argument("--out", help="output path (default stdout)")

    sp = sub.add_parser("bench", help="CSV of solver results and wall times")
    sp.add_argument("instances", nargs="+", help="instance JSON paths")
    sp.add_argument(
        "--variant",
        action="append",
        choices=sorted(_VARIANTS),
        default=None,
        help="repeatable; default benches v1, v2 and v3",
    )
    sp.add_argument("--mode", choices=("exact", "heuristic"), default=None, help="v2 arrangement solver")
    sp.add_argument("--jobs", type=int, default=1, help="worker cap; solvers currently use one process")
    sp.add_argument("--no-timing", action="store_true", help="blank the wall-time column (deterministic bytes)")
    sp.add_argument("--out", help="CSV path (default stdout)")
    return p


# ---------------------------------------------------------------------------
# plumbing
# ---------------------------------------------------------------------------


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc}") from exc


def _write_bytes(path: Optional[str], payload: bytes) -> None:
    if path is None:
        sys.stdout.buffer.write(payload)
        sys.stdout.buffer.flush()
        return
    try:
        with open(path, "wb") as fh:
            fh.write(payload)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {path}: {exc}") from exc


def _load_instance(path: str):
    tree = parse_instance(_read_text(path))
    report = validate(tree)
    if not report.ok:
        lines = "; ".join(f"{v.code}: {v.detail}" for v in report.violations[:5])
        raise CliError(EXIT_INVALID, f"instance does not validate: {lines}")
    return tree


def _check_jobs(jobs: int) -> None:
    if jobs < 1:
        raise CliError(EXIT_INVALID, "--jobs must be at least 1")


def _solver_for(variant: Variant, mode: Optional[str]) -> tuple[str, Callable]:
    """Resolve (mode label, solver callable) and reject impossible pairs."""
    if variant is Variant.V1:
        if mode == "heuristic":
            raise CliError(EXIT_INFEASIBLE, "v1 has no heuristic mode; the sweep is exact")
        return "exact", solve_v1
    if variant is Variant.V2:
        chosen = mode or "exact"
        sm = SolveMode.EXACT if chosen == "exact" else SolveMode.HEURISTIC

        def run_v2(tree, column_order=None):
            return solve_v2(tree, mode=sm, column_order=column_order)

        return chosen, run_v2
    if mode == "exact":
        raise CliError(
            EXIT_INFEASIBLE,
            "v3 has no exact solver mode; use the greedy or the oracle subcommand",
        )
    return "heuristic", solve_v3_greedy


def _emit_solution(args, tree, emb, report) -> None:
    payload = serialize_embedding(tree, emb, report.as_dict())
    _write_bytes(args.out, payload)
    if args.svg:
        layout = assign_coordinates(tree, emb)
        colors = (
            tuple(s.strip() for s in args.strip_colors.split(","))
            if args.strip_colors
            else ("#eef2f7", "#ffffff")
        )
        pts = crossing_points(tree, emb) if args.mark_crossings else None
        svg = emit_svg(
            tree,
            layout,
            scale=args.scale,
            mark_crossings=args.mark_crossings,
            crossing_points=pts,
            strip_colors=colors,
        )
        _write_bytes(args.svg, svg)
    line = (
        f"k_subtree={report.k_subtree} k_column={report.k_column} "
        f"k_inter={report.k_inter} total={report.total}\n"
    )
    sys.stdout.write(line)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_solve(args) -> int:
    _check_jobs(args.jobs)
    tree = _load_instance(args.instance)
    variant = _VARIANTS[args.variant]
    mode, solver = _solver_for(variant, args.mode)
    if args.column_order == "variable":
        emb, report = solve_variable_column_order(tree, variant, solver=solver)
    else:
        emb, report = solver(tree)
    ok, why = check_validity(tree, emb, variant)
    if not ok:
        raise CliError(EXIT_INFEASIBLE, f"solver produced an invalid embedding: {why[0]}")
    _emit_solution(args, tree, emb, report)
    if args.compare:
        if variant is not Variant.V2 or mode != "heuristic":
            raise CliError(EXIT_INVALID, "--compare needs --variant v2 --mode heuristic")
        try:
            _, exact_rep = solve_v2(tree, mode=SolveMode.EXACT)
        except ComponentTooLargeError as exc:
            sys.stderr.write(f"compare skipped: {exc}\n")
        else:
            sys.stdout.write(
                f"compare exact_total={exact_rep.total} "
                f"heuristic_total={report.total} gap={report.total - exact_rep.total}\n"
            )
    return EXIT_OK


def _cmd_oracle(args) -> int:
    _check_jobs(args.jobs)
    tree = _load_instance(args.instance)
    variant = _VARIANTS[args.variant]

    def oracle(t, column_order=None):
        return brute_force_optimum(t, variant, column_order, space_limit=args.space_limit)

    if args.column_order == "variable":
        emb, report = solve_variable_column_order(tree, variant, solver=oracle)
    else:
        emb, report = oracle(tree)
    _emit_solution(args, tree, emb, report)
    return EXIT_OK


def _cmd_generate(args) -> int:
    if args.generator == "gadget":
        digraph = parse_digraph(_read_text(args.edges))
        tree = fas_to_columntree(digraph, _FLAVORS[args.flavor])
    elif args.generator == "random":
        seed = args.seed
        env = os.environ.get("COLTREE_SEED")
        if env is not None:
            try:
                seed = int(env)
            except ValueError:
                raise CliError(EXIT_INVALID, f"COLTREE_SEED must be an integer, got {env!r}")
        tree = random_instance(
            RandomParams(n=args.n, columns=args.columns, max_degree=args.max_degree, seed=seed)
        )
    else:
        tree = adversarial_v3_instance(args.x)
    _write_bytes(args.out, serialize_instance(tree))
    return EXIT_OK


def _cmd_bench(args) -> int:
    _check_jobs(args.jobs)
    variants = args.variant or ["v1", "v2", "v3"]
    buf = _stdio.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["instance", "variant", "mode", "k_subtree", "k_column", "k_inter", "total", "wall_s"]
    )
    for path in args.instances:
        tree = _load_instance(path)
        name = os.path.splitext(os.path.basename(path))[0]
        for vname in variants:
            variant = _VARIANTS[vname]
            mode, solver = _solver_for(variant, args.mode if variant is Variant.V2 else None)
            start = time.perf_counter()
            _, report = solver(tree)
            wall = time.perf_counter() - start
            writer.writerow(
                [
                    name,
                    vname,
                    mode,
                    report.k_subtree,
                    report.k_column,
                    report.k_inter,
                    report.total,
                    "" if args.no_timing else f"{wall:.6f}",
                ]
            )
    _write_bytes(args.out, buf.getvalue().encode("utf-8"))
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry points
# ---------------------------------------------------------------------------


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "oracle":
            return _cmd_oracle(args)
        if args.command == "generate":
            return _cmd_generate(args)
        return _cmd_bench(args)
    except CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.code
    except (
        InfeasibleVariantError,
        InvalidEmbeddingError,
        SearchSpaceError,
        ComponentTooLargeError,
        TooManyColumnsError,
        DegreeLimitError,
    ) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INFEASIBLE
    except (ParseError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_IO


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
