"""Command line interface: ``zchambers <command> --source ...``.

Exit codes: 0 success, 1 usage or input error, 2 arithmetic overflow,
3 interrupted with a resumable checkpoint written.
"""

from __future__ import annotations

import argparse
import json
import re
import signal
import sys
import threading
import time
from dataclasses import dataclass

from .chambers.checkpoint import Checkpoint
from .chambers.driver import (
    DEFAULT_BUDGET,
    METHODS,
    SearchInterrupted,
    count_posdef,
    resume,
)
from .chambers.report import ChamberReport
from .chambers.search import iter_posdef_subsets
from .errors import ArithmeticOverflow, ZChambersError
from .exact_linalg import rank_exact, save_matrix
from .figure import render_matrix_figure
from .oracle import CSV_HEADER, DEFAULT_GUARD, bench_compare, oracle_enumerate
from .sources import Source, resolve_source

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_OVERFLOW = 2
EXIT_INTERRUPTED = 3

DEFAULT_DUMP_LIMIT = 24


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    mode: str
    source: str | None
    prefix: int | None = None
    workers: int = 1
    split_depth: int | None = None
    backend: str = "int64"
    method: str = "incremental"
    budget: int = DEFAULT_BUDGET
    checkpoint: str | None = None
    checkpoint_interval: float = 60.0
    output_format: str = "human"
    guard: int = DEFAULT_GUARD
    dump_limit: int = DEFAULT_DUMP_LIMIT
    negate: bool = True
    extended: bool = False
    progress: bool = False


def _add_source(p, required=True):
    p.add_argument("--source", required=required, help="builder name or matrix file")
    p.add_argument("--prefix", type=int, help="use the leading k x k block")
    p.add_argument(
        "--no-negate",
        dest="negate",
        action="store_false",
        help="count positive definite submatrices of the matrix as given "
        "(default: treat it as an intersection matrix and negate)",
    )


def _add_run(p):
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--split-depth", type=int)
    p.add_argument("--backend", choices=("int64", "bigint"), default="int64")
    p.add_argument(
        "--method",
        choices=METHODS,
        default="incremental",
        help="per-candidate test (literal: every grow step as written)",
    )
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="subsets per work chunk")
    p.add_argument("--checkpoint", help="checkpoint file (written periodically and on interrupt)")
    p.add_argument("--checkpoint-interval", type=float, default=60.0, help="seconds")
    p.add_argument("--progress", action="store_true", help="periodic progress on stderr")
    p.add_argument("--extended", action="store_true", help="allow runs that take hours")


def _add_format(p, choices=("human", "json")):
    p.add_argument("--format", dest="output_format", choices=choices, default="human")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zchambers", description="Zariski chamber counting")
    sub = parser.add_subparsers(dest="mode", required=True, parser_class=_Parser)

    p = sub.add_parser("count", help="count chambers (positive definite submatrices)")
    _add_source(p)
    _add_run(p)
    _add_format(p)

    p = sub.add_parser("subsets", help="list every chamber support")
    _add_source(p)
    p.add_argument("--dump-limit", type=int, default=DEFAULT_DUMP_LIMIT)
    _add_format(p)

    p = sub.add_parser("oracle", help="count with the from-scratch reference enumerator")
    _add_source(p)
    p.add_argument("--guard", type=int, default=DEFAULT_GUARD)
    _add_format(p)

    p = sub.add_parser("bench", help="time from-scratch (A1) against incremental (A2)")
    _add_source(p)
    p.add_argument("--prefixes", help="comma separated list of leading block sizes")
    p.add_argument("--repetitions", type=int, default=3)
    p.add_argument("--backend", choices=("int64", "bigint"), default="int64")
    p.add_argument("--a2-method", choices=("incremental", "literal"), default="incremental")

    p = sub.add_parser("invariants", help="rank, discriminant and consistency checks")
    _add_source(p)
    p.add_argument("--discrepancy-report", help="write formula/determinant mismatches here")
    _add_format(p)

    p = sub.add_parser("export", help="write the matrix in text format")
    _add_source(p)
    p.add_argument("--output", "-o", required=True)

    p = sub.add_parser("render", help="write the matrix as a PGM image or text grid")
    _add_source(p)
    p.add_argument("--output", "-o", required=True)
    p.add_argument("--style", choices=("pgm", "text"), default="pgm")
    p.add_argument("--scale", type=int, default=8, help="pixels per cell (pgm)")

    p = sub.add_parser("resume", help="continue an interrupted count")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--source", help="matrix source (default: recorded in the checkpoint)")
    p.add_argument("--prefix", type=int)
    p.add_argument("--no-negate", dest="negate", action="store_false")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--backend", choices=("int64", "bigint"), default="int64")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--checkpoint-interval", type=float, default=60.0)
    p.add_argument("--progress", action="store_true")
    _add_format(p)
    return parser


# -- output --------------------------------------------------------------------


def _report_dict(report: ChamberReport, mode: str, negated: bool) -> dict:
    data = {"mode": mode, "negated": negated}
    data.update(report.to_json_dict())
    return data


def _emit_report(report: ChamberReport, mode: str, fmt: str, negated: bool, out) -> None:
    if fmt == "json":
        json.dump(_report_dict(report, mode, negated), out, indent=2)
        out.write("\n")
        return
    out.write(f"matrix           {report.name} (n = {report.matrix_dimension})\n")
    out.write(f"sha256           {report.matrix_digest}\n")
    out.write(f"posdef subsets   {report.posdef_submatrix_count}\n")
    out.write(f"total chambers   {report.total_chambers}\n")
    out.write(f"max support      {report.max_support}\n")
    out.write(f"elapsed          {report.elapsed:.3f} s  (workers: {report.workers})\n")
    if report.lineage:
        out.write(f"resumed from     {' -> '.join(report.lineage)}\n")
    out.write("\n" + report.format_table() + "\n")


class _Progress:
    def __init__(self, interval: float = 5.0):
        self.interval = interval
        self.last = time.monotonic()
        self.t0 = self.last

    def __call__(self, visited: int, frontier) -> None:
        now = time.monotonic()
        if now - self.last < self.interval:
            return
        self.last = now
        rate = visited / max(now - self.t0, 1e-9)
        where = list(frontier.subset) if frontier is not None else "-"
        print(f"[progress] visited={visited} rate={rate:.0f}/s frontier={where}", file=sys.stderr)


class _StopFlag:
    """SIGINT/SIGTERM request a stop at the next chunk boundary."""

    def __init__(self):
        self.event = threading.Event()
        self._old = {}

    def __enter__(self):
        for sig in (signal.SIGINT, signal.SIGTERM):
            self._old[sig] = signal.signal(sig, self._handle)
        return self

    def _handle(self, signum, frame):
        print("stop requested; finishing current chunk", file=sys.stderr)
        self.event.set()

    def __exit__(self, *exc):
        for sig, old in self._old.items():
            signal.signal(sig, old)
        return False

    def __call__(self) -> bool:
        return self.event.is_set()


def _matrix_for(source: Source, negate: bool):
    return source.matrix.negated() if negate else source.matrix


# -- commands --------------------------------------------------------------------


def run(config: RunConfig, out=None) -> int:
    """Execute one count-like command described by ``config``."""
    out = out or sys.stdout
    source = resolve_source(config.source, config.prefix)
    A = _matrix_for(source, config.negate)

    if config.mode == "count":
        if source.needs_extended and not config.extended:
            raise ZChambersError(
                f"{source.name} is an extended run (hours of CPU time); pass --extended"
            )
        progress = _Progress() if config.progress else None
        kwargs = dict(
            workers=config.workers,
            split_depth=config.split_depth,
            backend=config.backend,
            method=config.method,
            budget=config.budget,
            checkpoint_path=config.checkpoint,
            checkpoint_interval=config.checkpoint_interval,
            progress=progress,
            name=source.name,
        )
        if config.checkpoint:
            with _StopFlag() as stop:
                report = count_posdef(A, should_stop=stop, **kwargs)
        else:
            report = count_posdef(A, **kwargs)
        _emit_report(report, "count", config.output_format, config.negate, out)
        return EXIT_OK

    if config.mode == "oracle":
        report = oracle_enumerate(A, config.guard)
        report.name = source.name
        _emit_report(report, "oracle", config.output_format, config.negate, out)
        return EXIT_OK

    if config.mode == "subsets":
        if A.n > config.dump_limit:
            raise ZChambersError(
                f"refusing to list subsets of an n = {A.n} matrix (limit {config.dump_limit})"
            )
        subsets = list(iter_posdef_subsets(A))
        from collections import Counter

        report = ChamberReport(
            matrix_dimension=A.n,
            histogram=dict(Counter(len(s) for s in subsets)),
            matrix_digest=A.digest(),
            name=source.name,
        )
        if config.output_format == "json":
            data = _report_dict(report, "subsets", config.negate)
            data["subsets"] = [list(s) for s in subsets]
            json.dump(data, out, indent=2)
            out.write("\n")
        else:
            for s in subsets:
                out.write(" ".join(str(i) for i in s) + "\n")
        return EXIT_OK

    raise ZChambersError(f"unknown mode {config.mode!r}")


def _cmd_resume(args, out) -> int:
    cp = Checkpoint.load(args.checkpoint)
    spec, prefix = args.source, args.prefix
    if spec is None:
        m = re.fullmatch(r"(.*)\[:(\d+)\]", cp.name)
        spec, prefix = (m.group(1), int(m.group(2))) if m else (cp.name, None)
        if not spec:
            raise ZChambersError("checkpoint records no source; pass --source")
    source = resolve_source(spec, prefix)
    A = _matrix_for(source, args.negate)
    with _StopFlag() as stop:
        report = resume(
            cp,
            A,
            workers=args.workers,
            backend=args.backend,
            budget=args.budget,
            checkpoint_path=args.checkpoint,
            checkpoint_interval=args.checkpoint_interval,
            should_stop=stop,
            progress=_Progress() if args.progress else None,
        )
    _emit_report(report, "count", args.output_format, args.negate, out)
    return EXIT_OK


def _cmd_bench(args, out) -> int:
    prefixes = [int(x) for x in args.prefixes.split(",")] if args.prefixes else [args.prefix]
    out.write(CSV_HEADER + "\n")
    for prefix in prefixes:
        source = resolve_source(args.source, prefix)
        A = _matrix_for(source, args.negate)
        result = bench_compare(
            A, args.repetitions, name=source.name, backend=args.backend, a2_method=args.a2_method
        )
        out.write(result.csv_row() + "\n")
        out.flush()
    return EXIT_OK


def collect_invariants(source: Source) -> dict:
    M = source.matrix
    data: dict = {
        "matrix": source.name,
        "n": M.n,
        "rank": rank_exact(M, width=None),
        "diagonal": sorted({M.rows[i][i] for i in range(M.n)}),
        "off_diagonal": sorted({v for i, r in enumerate(M.rows) for j, v in enumerate(r) if i != j}),
    }
    if source.family == "segre-schur" and M.n == 64:
        from .surfaces.segre import (
            NAMED_SUBLATTICE,
            build_segre_lines,
            closed_form_discrepancies,
            lies_on_surface,
        )
        from .exact_linalg import det_fraction_free

        data["sublattice_discriminant"] = det_fraction_free(M.principal(NAMED_SUBLATTICE), None)
        data["lines_on_surface"] = all(lies_on_surface(L) for L in build_segre_lines())
        disc = closed_form_discrepancies()
        data["formula_vs_determinant"] = "OK" if not disc else "MISMATCH"
        data["discrepancies"] = [d.to_dict() for d in disc]
    return data


def _cmd_invariants(args, out) -> int:
    source = resolve_source(args.source, args.prefix)
    data = collect_invariants(source)
    if args.discrepancy_report is not None:
        with open(args.discrepancy_report, "w", encoding="utf-8") as fh:
            json.dump(data.get("discrepancies", []), fh, indent=2)
            fh.write("\n")
    if args.output_format == "json":
        json.dump(data, out, indent=2)
        out.write("\n")
        return EXIT_OK
    out.write(f"matrix={data['matrix']} n={data['n']}\n")
    out.write(f"rank={data['rank']}\n")
    out.write(f"diagonal={data['diagonal']} off_diagonal={data['off_diagonal']}\n")
    if "sublattice_discriminant" in data:
        out.write(f"sublattice discriminant={data['sublattice_discriminant']}\n")
        out.write(f"lines on surface={'OK' if data['lines_on_surface'] else 'FAIL'}\n")
        out.write(f"formula-vs-determinant agreement={data['formula_vs_determinant']}\n")
        for d in data["discrepancies"]:
            out.write(f"  mismatch {d}\n")
    return EXIT_OK


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.mode in ("count", "subsets", "oracle"):
            config = RunConfig(
                mode=args.mode,
                source=args.source,
                prefix=args.prefix,
                negate=args.negate,
                output_format=args.output_format,
            )
            for key in (
                "workers", "split_depth", "backend", "method", "budget", "checkpoint",
                "checkpoint_interval", "guard", "dump_limit", "extended", "progress",
            ):
                if hasattr(args, key):
                    setattr(config, key, getattr(args, key))
            return run(config, out)
        if args.mode == "resume":
            return _cmd_resume(args, out)
        if args.mode == "bench":
            return _cmd_bench(args, out)
        if args.mode == "invariants":
            return _cmd_invariants(args, out)
        source = resolve_source(args.source, args.prefix)
        matrix = _matrix_for(source, False)
        if args.mode == "export":
            save_matrix(matrix, args.output)
        else:
            render_matrix_figure(matrix, args.output, args.style, args.scale)
        return EXIT_OK
    except SearchInterrupted as exc:
        print(f"zchambers: {exc}; resume with `zchambers resume --checkpoint {exc.path}`",
              file=sys.stderr)
        return EXIT_INTERRUPTED
    except ArithmeticOverflow as exc:
        print(f"zchambers: {exc}; rerun with --backend bigint", file=sys.stderr)
        return EXIT_OVERFLOW
    except (ZChambersError, OSError) as exc:
        print(f"zchambers: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
