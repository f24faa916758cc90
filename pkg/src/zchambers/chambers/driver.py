"""Counting driver: work splitting, worker threads, checkpoint/resume.

The search tree is cut into work items (see :class:`WorkItem`).  Each item is
processed in chunks of at most ``budget`` visited subsets; a chunk returns a
histogram delta and, unless the item is finished, the frontier to continue
from.  All merging happens on the calling thread, so a checkpoint taken
between merges is always consistent: merged histogram plus every item that
is queued or in flight, at its last merged frontier.

Workers are threads.  The compiled kernels release the GIL, so with the
``int64`` backend they run truly in parallel; the ``bigint`` backend is
correct but serialised by the interpreter.
"""

from __future__ import annotations

import time
from collections import Counter, deque
from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait
from typing import Callable

from ..errors import (
    ArithmeticOverflow,
    InternalConsistencyError,
    PreconditionError,
    ZChambersError,
)
from ..exact_linalg import SymmetricIntMatrix
from . import kernels
from .checkpoint import Checkpoint, WorkItem
from .report import ChamberReport
from .search import iter_posdef_subsets


DEFAULT_BUDGET = 1_000_000
BACKENDS = ("int64", "bigint")
# "incremental": column-and-pivot decision; "literal": every grow step as
# written; "from-scratch": fresh Sylvester test per candidate
METHODS = ("incremental", "literal", "from-scratch")


class SearchInterrupted(ZChambersError):
    """Raised when a run is stopped early; carries a resumable checkpoint."""

    def __init__(self, checkpoint: Checkpoint, path=None):
        self.checkpoint = checkpoint
        self.path = path
        where = f" (saved to {path})" if path else ""
        super().__init__(f"search interrupted with {len(checkpoint.pending)} pending items{where}")


# -- chunk runners -------------------------------------------------------------


class KernelRunner:
    """Runs chunks with the compiled int64 kernels."""

    def __init__(self, A: SymmetricIntMatrix, method: str = "incremental"):
        if A.max_abs() >= kernels.LIMIT:
            raise ArithmeticOverflow("loading matrix entries", A.max_abs())
        self.A = A
        self.An = A.to_numpy()
        self.method = method

    def __call__(self, item: WorkItem, budget: int, max_depth: int | None = None):
        n = self.A.n
        S, hist, B, T, lead = kernels.workspace(n)
        s = len(item.subset)
        for t, v in enumerate(item.subset):
            S[t] = v - 1
        depth = n if max_depth is None else max_depth
        if self.method != "from-scratch":
            search = (
                kernels.search_incremental
                if self.method == "incremental"
                else kernels.search_incremental_literal
            )
            status, s, k, _ = search(
                self.An, S, s, item.floor, item.next_k - 1, depth, budget, hist, B, T, lead
            )
        else:
            if s and not _prefix_posdef(self.A, item.subset):
                status, k = kernels.STATUS_BAD_PREFIX, item.next_k - 1
            else:
                status, s, k, _ = kernels.search_from_scratch(
                    self.An, S, s, item.floor, item.next_k - 1, depth, budget, hist, B
                )
        _raise_for_status(status, item)
        delta = {int(i): int(c) for i, c in enumerate(hist) if c}
        if status == kernels.STATUS_PAUSED:
            nxt = WorkItem(tuple(int(x) + 1 for x in S[:s]), int(k) + 1, item.floor)
            return delta, nxt
        return delta, None


def _prefix_posdef(A: SymmetricIntMatrix, subset) -> bool:
    from ..exact_linalg import leading_minors_all_positive

    return leading_minors_all_positive(A.principal(subset), width=None)


def _raise_for_status(status: int, item: WorkItem) -> None:
    if status == kernels.STATUS_OVERFLOW:
        raise ArithmeticOverflow("incremental Bareiss update (int64 kernel)")
    if status == kernels.STATUS_INEXACT:
        raise InternalConsistencyError("inexact Bareiss division in compiled search")
    if status == kernels.STATUS_BAD_PREFIX:
        raise InternalConsistencyError(
            f"work item prefix {item.subset} is not a positive definite chain"
        )


class PythonRunner:
    """Runs chunks on the interpreted state; ``width=None`` means unbounded."""

    def __init__(self, A: SymmetricIntMatrix, method: str = "incremental", width: int | None = None):
        self.A = A
        self.method = method
        self.width = width

    def __call__(self, item: WorkItem, budget: int, max_depth: int | None = None):
        if self.method == "from-scratch":
            from ..oracle import iter_posdef_from_scratch as walk
        else:
            walk = iter_posdef_subsets
        hist: Counter[int] = Counter()
        visits = 0
        last = None
        for subset in walk(
            self.A,
            width=self.width,
            max_depth=max_depth,
            start=item.subset,
            floor=item.floor,
            next_k=item.next_k,
        ):
            hist[len(subset)] += 1
            visits += 1
            if visits >= budget:
                last = subset
                break
        if last is None:
            return dict(hist), None
        return dict(hist), WorkItem(last, last[-1] + 1, item.floor)


def make_runner(A: SymmetricIntMatrix, backend: str = "int64", method: str = "incremental"):
    if backend not in BACKENDS:
        raise PreconditionError(f"unknown backend {backend!r}; choose from {BACKENDS}")
    if method not in METHODS:
        raise PreconditionError(f"unknown method {method!r}; choose from {METHODS}")
    if backend == "int64":
        return KernelRunner(A, method)
    return PythonRunner(A, method, width=None)


# -- planning ------------------------------------------------------------------


def plan_work(
    A: SymmetricIntMatrix, workers: int = 1, split_depth: int | None = None
) -> tuple[dict[int, int], list[WorkItem]]:
    """Cut the tree at a fixed depth.

    Returns the histogram of all positive definite sets with at most
    ``depth`` elements together with one work item per set of exactly
    ``depth`` elements (covering its strict supersets).  Without an explicit
    depth, picks the smallest one yielding at least ``8 * workers`` items;
    a single worker gets the whole tree as one item.
    """
    if workers < 1:
        raise PreconditionError(f"worker count must be at least 1, got {workers}")
    if split_depth is None and workers == 1:
        return {}, [WorkItem((), 1, 0)]
    if split_depth == 0:
        return {}, [WorkItem((), 1, 0)]
    target = 8 * workers
    depth = split_depth or 1
    while True:
        sets = list(iter_posdef_subsets(A, width=None, max_depth=depth))
        items = [WorkItem(S, S[-1] + 1, depth) for S in sets if len(S) == depth]
        if split_depth is not None or len(items) >= target or depth >= A.n or not items:
            break
        depth += 1
    shallow = Counter(len(S) for S in sets)
    return dict(shallow), items


# -- the driver ----------------------------------------------------------------


def run_work(
    A: SymmetricIntMatrix,
    items: list[WorkItem],
    *,
    base_histogram: dict[int, int] | None = None,
    workers: int = 1,
    backend: str = "int64",
    method: str = "incremental",
    budget: int = DEFAULT_BUDGET,
    checkpoint_path=None,
    checkpoint_interval: float = 60.0,
    should_stop: Callable[[], bool] | None = None,
    progress: Callable[[int, WorkItem | None], None] | None = None,
    name: str = "",
    lineage: list[str] | None = None,
    elapsed_before: float = 0.0,
) -> ChamberReport:
    runner = make_runner(A, backend, method)
    hist: Counter[int] = Counter(base_histogram or {})
    pending: deque[WorkItem] = deque(items)
    lineage = list(lineage or [])
    t0 = time.perf_counter()
    last_save = t0

    def snapshot(in_flight) -> Checkpoint:
        return Checkpoint(
            matrix_sha256=A.digest(),
            n=A.n,
            histogram=dict(hist),
            pending=list(in_flight) + list(pending),
            method=method,
            elapsed=elapsed_before + time.perf_counter() - t0,
            name=name,
            lineage=lineage,
        )

    def merge(delta, nxt) -> None:
        hist.update(delta)
        if nxt is not None:
            pending.appendleft(nxt)
        if progress is not None:
            progress(sum(hist.values()), nxt)

    def maybe_save(in_flight) -> None:
        nonlocal last_save
        if checkpoint_path is None:
            return
        now = time.perf_counter()
        if now - last_save >= checkpoint_interval:
            snapshot(in_flight).save(checkpoint_path)
            last_save = now

    def interrupt(in_flight=()) -> None:
        cp = snapshot(in_flight)
        if checkpoint_path is not None:
            cp.save(checkpoint_path)
        raise SearchInterrupted(cp, checkpoint_path)

    if workers == 1:
        while pending:
            item = pending.popleft()
            try:
                delta, nxt = runner(item, budget)
            except BaseException:
                pending.appendleft(item)
                raise
            merge(delta, nxt)
            if should_stop is not None and should_stop():
                interrupt()
            maybe_save(())
    else:
        stopping = False
        with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="zchambers") as pool:
            in_flight: dict = {}
            try:
                while pending or in_flight:
                    while pending and len(in_flight) < workers and not stopping:
                        item = pending.popleft()
                        in_flight[pool.submit(runner, item, budget)] = item
                    if not in_flight:
                        break
                    done, _ = wait(in_flight, return_when=FIRST_COMPLETED)
                    for fut in done:
                        in_flight.pop(fut)
                        merge(*fut.result())
                    if not stopping and should_stop is not None and should_stop():
                        stopping = True
                    maybe_save(in_flight.values())
            except BaseException:
                for fut in in_flight:
                    fut.cancel()
                raise
        if stopping:
            interrupt()

    report = ChamberReport(
        matrix_dimension=A.n,
        histogram=dict(hist),
        elapsed=elapsed_before + time.perf_counter() - t0,
        workers=workers,
        matrix_digest=A.digest(),
        name=name,
        lineage=lineage,
    )
    if checkpoint_path is not None:
        # leave a finished checkpoint behind: empty pending list, final counts
        Checkpoint(
            matrix_sha256=A.digest(),
            n=A.n,
            histogram=dict(hist),
            pending=[],
            method=method,
            elapsed=report.elapsed,
            name=name,
            lineage=lineage,
        ).save(checkpoint_path)
    return report


def count_posdef(
    A: SymmetricIntMatrix,
    *,
    workers: int = 1,
    split_depth: int | None = None,
    backend: str = "int64",
    method: str = "incremental",
    **kwargs,
) -> ChamberReport:
    """Count positive definite principal submatrices of ``A`` by cardinality.

    Extra keyword arguments go to :func:`run_work` (budget, checkpointing,
    stop and progress callbacks).
    """
    shallow, items = plan_work(A, workers, split_depth)
    return run_work(
        A, items, base_histogram=shallow, workers=workers, backend=backend, method=method, **kwargs
    )


def resume(checkpoint: Checkpoint, A: SymmetricIntMatrix, **kwargs) -> ChamberReport:
    """Continue an interrupted run; ``A`` must be the matrix it was started on."""
    checkpoint.verify_matrix(A)
    kwargs.setdefault("method", checkpoint.method)
    kwargs.setdefault("name", checkpoint.name)
    return run_work(
        A,
        list(checkpoint.pending),
        base_histogram=checkpoint.histogram,
        lineage=checkpoint.lineage + [checkpoint.checkpoint_id],
        elapsed_before=checkpoint.elapsed,
        **kwargs,
    )


def checkpoint_at_start(A: SymmetricIntMatrix, *, workers: int = 1, split_depth=None,
                        method: str = "incremental", name: str = "") -> Checkpoint:
    """A checkpoint describing a run that has not started yet."""
    shallow, items = plan_work(A, workers, split_depth)
    return Checkpoint(A.digest(), A.n, shallow, items, method=method, name=name)


def count_zariski_chambers(intersection_matrix: SymmetricIntMatrix, **kwargs) -> ChamberReport:
    """Chambers supported by the given curves: negate, count, add the nef chamber.

    The returned report's ``total_chambers`` includes the nef chamber.
    """
    return count_posdef(intersection_matrix.negated(), **kwargs)


def enumerate_parallel(
    A: SymmetricIntMatrix,
    worker_count: int,
    visitor: Callable[[tuple[int, ...]], None] | None = None,
    *,
    split_depth: int | None = None,
    **kwargs,
) -> ChamberReport:
    """Parallel enumeration.  Counting mode unless a visitor is supplied.

    In visitor mode every task collects its subsets privately; the visitor is
    then called on the calling thread, shallow sets first and tasks in plan
    order, so repeated runs see the same sequence.
    """
    if visitor is None:
        return count_posdef(A, workers=worker_count, split_depth=split_depth, **kwargs)
    width = kwargs.pop("width", 64)
    t0 = time.perf_counter()
    shallow, items = plan_work(A, worker_count, split_depth)
    depth = max(shallow, default=0)
    hist: Counter[int] = Counter(shallow)
    if depth:
        for S in iter_posdef_subsets(A, width=width, max_depth=depth):
            visitor(S)

    def task(item: WorkItem) -> list[tuple[int, ...]]:
        return list(
            iter_posdef_subsets(
                A, width=width, start=item.subset, floor=item.floor, next_k=item.next_k
            )
        )

    with ThreadPoolExecutor(max_workers=worker_count) as pool:
        for found in pool.map(task, items):
            for S in found:
                hist[len(S)] += 1
                visitor(S)
    return ChamberReport(
        matrix_dimension=A.n,
        histogram=dict(hist),
        elapsed=time.perf_counter() - t0,
        workers=worker_count,
        matrix_digest=A.digest(),
    )
