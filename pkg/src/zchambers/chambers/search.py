"""Positive definite subset enumeration over an :class:`EliminationState`.

This is the interpreted route: every candidate is decided by one incremental
grow on a Python-integer state, so it supports visitors, state tracing and
unbounded integers.  The compiled kernels in :mod:`.kernels` walk exactly the
same tree for bulk counting.
"""

from __future__ import annotations

import time
from collections import Counter
from typing import Callable, Iterator, Sequence

from ..exact_linalg import DEFAULT_WIDTH, EliminationState, SymmetricIntMatrix
from .report import ChamberReport

SubsetVisitor = Callable[[tuple[int, ...]], None]
StateHook = Callable[[EliminationState, bool], None]


def iter_posdef_subsets(
    A: SymmetricIntMatrix,
    *,
    width: int | None = DEFAULT_WIDTH,
    max_depth: int | None = None,
    start: Sequence[int] = (),
    floor: int | None = None,
    next_k: int | None = None,
    on_state: StateHook | None = None,
) -> Iterator[tuple[int, ...]]:
    """Yield every S (1-based, sorted) with ``A_S`` positive definite.

    Order is depth-first lexicographic: (1,), (1, 2), (1, 2, 3), ...

    ``start`` is a positive definite set to continue from, as if it had just
    been visited; the walk backtracks no higher than ``floor`` elements
    (default ``len(start)``, i.e. only strict supersets of ``start`` that
    add larger indices); ``next_k`` is the first candidate to try.
    ``max_depth`` caps ``|S|``.
    ``on_state(state, accepted)`` sees the state right after every grow.
    """
    n = A.n
    depth_cap = n if max_depth is None else max_depth
    state = EliminationState.from_subset(A, start, width)
    if floor is None:
        floor = len(start)
    k = next_k if next_k is not None else (start[-1] + 1 if start else 1)
    while True:
        if k <= n and state.size < depth_cap:
            state.grow(k)
            accepted = state.is_pos_def()
            if on_state is not None:
                on_state(state, accepted)
            if accepted:
                yield tuple(state.S)
            else:
                state.shrink()
            k += 1
        else:
            if state.size <= floor:
                return
            k = state.S[-1] + 1
            state.shrink()


def enumerate_posdef(
    A: SymmetricIntMatrix,
    visitor: SubsetVisitor | None = None,
    *,
    width: int | None = DEFAULT_WIDTH,
    on_state: StateHook | None = None,
) -> ChamberReport:
    """Visit every positive definite principal submatrix once, in DFS order.

    Returns the per-cardinality histogram.  Counting without a visitor is
    far faster through :func:`zchambers.chambers.driver.count_posdef`.
    """
    t0 = time.perf_counter()
    hist: Counter[int] = Counter()
    for subset in iter_posdef_subsets(A, width=width, on_state=on_state):
        hist[len(subset)] += 1
        if visitor is not None:
            visitor(subset)
    return ChamberReport(
        matrix_dimension=A.n,
        histogram=dict(hist),
        elapsed=time.perf_counter() - t0,
        matrix_digest=A.digest(),
    )
