"""Reference enumerator that decides every subset from scratch.

Same backtracking tree and pruning as the incremental search, but each
candidate ``A_S`` is tested with a fresh Sylvester check (all leading minors
via one-shot Bareiss elimination, O(s^3)).  Nothing is shared with the
incremental state, which makes it the correctness oracle for small inputs
and the baseline for timing comparisons.
"""

from __future__ import annotations

import statistics
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .chambers.report import ChamberReport
from .errors import GuardExceeded
from .exact_linalg import DEFAULT_WIDTH, SymmetricIntMatrix, leading_minors_all_positive

DEFAULT_GUARD = 24
DECISION_LOG_LIMIT = 20


def iter_posdef_from_scratch(
    A: SymmetricIntMatrix,
    *,
    width: int | None = DEFAULT_WIDTH,
    max_depth: int | None = None,
    start: Sequence[int] = (),
    floor: int | None = None,
    next_k: int | None = None,
    decisions: list | None = None,
) -> Iterator[tuple[int, ...]]:
    """Depth-first lexicographic walk deciding each candidate from scratch.

    Takes the same frontier arguments as
    :func:`zchambers.chambers.search.iter_posdef_subsets`.  When
    ``decisions`` is a list, every tested subset is appended with its verdict.
    """
    n = A.n
    depth_cap = n if max_depth is None else max_depth
    S = list(start)
    if floor is None:
        floor = len(S)
    k = next_k if next_k is not None else (S[-1] + 1 if S else 1)
    while True:
        if k <= n and len(S) < depth_cap:
            S.append(k)
            ok = leading_minors_all_positive(A.principal(S), width)
            if decisions is not None:
                decisions.append((tuple(S), ok))
            if ok:
                yield tuple(S)
            else:
                S.pop()
            k += 1
        else:
            if len(S) <= floor:
                return
            k = S.pop() + 1


@dataclass
class OracleReport(ChamberReport):
    subsets: list[tuple[int, ...]] = field(default_factory=list)
    decisions: list[tuple[tuple[int, ...], bool]] | None = None


def oracle_enumerate(
    A: SymmetricIntMatrix,
    max_n_guard: int = DEFAULT_GUARD,
    *,
    log_decisions: bool = False,
    width: int | None = DEFAULT_WIDTH,
) -> OracleReport:
    """All positive definite principal submatrices, each tested from scratch.

    Refuses matrices larger than ``max_n_guard``; the walk is exponential.
    The decision log records every tested subset and is only available for
    ``n <= 20``.
    """
    if A.n > max_n_guard:
        raise GuardExceeded(f"oracle refuses n = {A.n} > guard {max_n_guard}")
    if log_decisions and A.n > DECISION_LOG_LIMIT:
        raise GuardExceeded(f"decision log is limited to n <= {DECISION_LOG_LIMIT}")
    t0 = time.perf_counter()
    decisions: list | None = [] if log_decisions else None
    subsets = list(iter_posdef_from_scratch(A, width=width, decisions=decisions))
    hist = Counter(len(S) for S in subsets)
    return OracleReport(
        matrix_dimension=A.n,
        histogram=dict(hist),
        elapsed=time.perf_counter() - t0,
        matrix_digest=A.digest(),
        subsets=subsets,
        decisions=decisions,
    )


def brute_force_posdef(A: SymmetricIntMatrix) -> set[tuple[int, ...]]:
    """Every nonempty subset tested, no pruning at all.  Tiny n only."""
    from itertools import combinations

    out = set()
    for size in range(1, A.n + 1):
        for S in combinations(range(1, A.n + 1), size):
            if leading_minors_all_positive(A.principal(S), None):
                out.add(S)
    return out


@dataclass(frozen=True)
class BenchResult:
    name: str
    n: int
    a1_ms: float
    a2_ms: float
    posdef_count: int

    @property
    def factor(self) -> float:
        return self.a1_ms / self.a2_ms if self.a2_ms > 0 else float("inf")

    def csv_row(self) -> str:
        return f"{self.name},{self.n},{self.a1_ms:.3f},{self.a2_ms:.3f},{self.factor:.3f}"


CSV_HEADER = "matrix,n,a1_ms,a2_ms,factor"


def _median_ms(fn, repetitions: int) -> tuple[float, object]:
    fn()  # warm-up, discarded
    samples = []
    result = None
    for _ in range(repetitions):
        t0 = time.perf_counter()
        result = fn()
        samples.append((time.perf_counter() - t0) * 1e3)
    return statistics.median(samples), result


def bench_compare(
    A: SymmetricIntMatrix,
    repetitions: int = 3,
    *,
    name: str = "",
    backend: str = "int64",
    a2_method: str = "incremental",
) -> BenchResult:
    """Median wall-clock of from-scratch (A1) against incremental (A2) search.

    Both sides use the same backend and the same tree walk, so the ratio
    reflects only the per-candidate test.  ``a2_method="literal"`` times the
    step-by-step grow instead of the default kernel.  Counts must agree.
    """
    from .chambers.driver import WorkItem, make_runner

    whole = WorkItem((), 1, 0)
    budget = 1 << 62
    a1 = make_runner(A, backend, "from-scratch")
    a2 = make_runner(A, backend, a2_method)
    a1_ms, (h1, _) = _median_ms(lambda: a1(whole, budget), repetitions)
    a2_ms, (h2, _) = _median_ms(lambda: a2(whole, budget), repetitions)
    if h1 != h2:
        raise AssertionError(f"from-scratch and incremental counts differ: {h1} != {h2}")
    return BenchResult(name or f"n{A.n}", A.n, a1_ms, a2_ms, sum(h2.values()))
