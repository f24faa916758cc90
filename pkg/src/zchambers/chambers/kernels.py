"""Compiled depth-first search kernels (numba, int64 with overflow checks).

All kernels walk the same search tree: nodes are index sets ``S`` (0-based,
strictly increasing), children of an accepted ``S`` are ``S + [k]`` for
``k > max(S)``, rejected sets are not extended.  They differ only in how a
candidate is decided:

* :func:`search_incremental_literal` keeps the Bareiss form ``B`` and the
  transform ``T`` of the current set and decides a candidate with one O(s^2)
  grow, performed step by step.
* :func:`search_incremental` keeps the same state but computes only the new
  column and the new pivot of a candidate (O(s^2), with an early exit), and
  finishes ``T`` for accepted candidates only.
* :func:`search_from_scratch` recomputes the leading minors of the
  candidate's principal submatrix every time, O(s^3).

Arithmetic is int64.  Every stored value is kept below ``2**62`` in
magnitude so that the difference of two checked products cannot wrap; any
larger value aborts the search with ``STATUS_OVERFLOW``.

Search signature shared by both kernels::

    status, s, k, visits = search(A, S, s, floor, k, max_depth, budget, hist, ...)

``S[:s]`` is the starting set (its prefixes must all be positive definite),
``k`` the next candidate index.  Only sets strictly larger than ``floor`` are
counted, into ``hist[len(S)]``.  On ``STATUS_PAUSED`` the returned ``(S[:s],
k)`` is the frontier to resume from.
"""

from __future__ import annotations

import numpy as np
from numba import njit

STATUS_DONE = 0
STATUS_PAUSED = 1
STATUS_OVERFLOW = 2
STATUS_INEXACT = 3
STATUS_BAD_PREFIX = 4

LIMIT = 1 << 62
_SMALL = 1 << 31
_FLIMIT = 4.611686018427387904e18  # 2.0 ** 62


@njit(inline="always")
def _mul(a, b):
    if -_SMALL < a < _SMALL and -_SMALL < b < _SMALL:
        return a * b, False
    if abs(float(a) * float(b)) >= _FLIMIT:
        return 0, True
    return a * b, False


@njit(inline="always")
def _cross_div(x, p, y, q, d):
    """(x*p - y*q) / d, exact.  Returns (value, status)."""
    u, o1 = _mul(x, p)
    v, o2 = _mul(y, q)
    if o1 or o2:
        return 0, STATUS_OVERFLOW
    r = u - v
    if d != 1:
        if d == 0:
            return 0, STATUS_INEXACT
        qt = r // d
        if qt * d != r:
            return 0, STATUS_INEXACT
        r = qt
    if r >= LIMIT or r <= -LIMIT:
        return 0, STATUS_OVERFLOW
    return r, STATUS_DONE


@njit(nogil=True, cache=True)
def _grow_b(A, S, s, k, B, lead):
    """Append row ``s`` of ``B`` for index ``k`` and clear it left of the diagonal.

    The new column ``T @ a`` must already sit in ``B[:s, s]``.  The entries
    cleared at each step are recorded in ``lead`` for :func:`_grow_t`.
    """
    for j in range(s):
        B[s, j] = A[k, S[j]]
    B[s, s] = A[k, k]
    for i in range(s):
        d = 1 if i == 0 else B[i - 1, i - 1]
        piv = B[i, i]
        ld = B[s, i]
        lead[i] = ld
        for j in range(i + 1, s + 1):
            v, st = _cross_div(B[s, j], piv, B[i, j], ld, d)
            if st != STATUS_DONE:
                return st
            B[s, j] = v
        B[s, i] = 0
    return STATUS_DONE


@njit(nogil=True, cache=True)
def _new_column(A, S, s, k, B, T):
    """B[:s, s] = T[:s, :s] @ A[S[:s], k]; T is lower triangular."""
    for r in range(s):
        acc = 0
        for j in range(r + 1):
            p, o = _mul(T[r, j], A[S[j], k])
            if o:
                return STATUS_OVERFLOW
            acc += p
            if acc >= LIMIT or acc <= -LIMIT:
                return STATUS_OVERFLOW
        B[r, s] = acc
    return STATUS_DONE


@njit(nogil=True, cache=True)
def _grow_t(s, B, T, lead):
    """Replay the row operations of :func:`_grow_b` on the new row of ``T``.

    Entries ``T[s, j]`` with ``i < j < s`` are zero until step ``j`` because
    ``T`` is lower triangular, so step ``i`` only touches ``j <= i`` and
    ``j == s``.
    """
    for j in range(s):
        T[s, j] = 0
    T[s, s] = 1
    for i in range(s):
        d = 1 if i == 0 else B[i - 1, i - 1]
        piv = B[i, i]
        ld = lead[i]
        for j in range(i + 1):
            v, st = _cross_div(T[s, j], piv, T[i, j], ld, d)
            if st != STATUS_DONE:
                return st
            T[s, j] = v
        v, st = _cross_div(T[s, s], piv, 0, 0, d)
        if st != STATUS_DONE:
            return st
        T[s, s] = v
    return STATUS_DONE


@njit(nogil=True, cache=True)
def grow(A, S, s, k, B, T, lead):
    """Full grow of index ``k`` onto ``S[:s]``: writes ``S[s]``, B and T."""
    st = _new_column(A, S, s, k, B, T)
    if st != STATUS_DONE:
        return st
    st = _grow_b(A, S, s, k, B, lead)
    if st != STATUS_DONE:
        return st
    S[s] = k
    return _grow_t(s, B, T, lead)


@njit(nogil=True, cache=True)
def _rebuild(A, S, s0, B, T, lead):
    """Grow ``S[:s0]`` one index at a time; every proper prefix must be accepted."""
    for t in range(s0):
        if t > 0 and B[t - 1, t - 1] <= 0:
            return STATUS_BAD_PREFIX
        st = grow(A, S, t, S[t], B, T, lead)
        if st != STATUS_DONE:
            return st
    if s0 > 0 and B[s0 - 1, s0 - 1] <= 0:
        return STATUS_BAD_PREFIX
    return STATUS_DONE


@njit(nogil=True, cache=True)
def _decide(A, S, s, k, B, T, col, early):
    """Last pivot of ``S[:s] + [k]`` from the new column alone.

    For symmetric input the entry eliminated from the new row at step ``i``
    equals the new column entry ``col[i]`` (both are the same bordered
    minor), so the lower right entry obeys
    ``x <- (x * B[i, i] - col[i]**2) / B[i-1, i-1]``.  With positive pivots
    ``x / B[i-1, i-1]`` never increases, so with ``early`` the loop stops as
    soon as ``x <= 0``.  Returns ``(status, x, steps_done)``.
    """
    x = A[k, k]
    for i in range(s):
        acc = 0
        for j in range(i + 1):
            p, o = _mul(T[i, j], A[S[j], k])
            if o:
                return STATUS_OVERFLOW, 0, i
            acc += p
            if acc >= LIMIT or acc <= -LIMIT:
                return STATUS_OVERFLOW, 0, i
        col[i] = acc
        d = 1 if i == 0 else B[i - 1, i - 1]
        x, st = _cross_div(x, B[i, i], acc, acc, d)
        if st != STATUS_DONE:
            return st, 0, i
        if early and x <= 0:
            return STATUS_DONE, x, i + 1
    return STATUS_DONE, x, s


@njit(nogil=True, cache=True)
def search_incremental(A, S, s, floor, k, max_depth, budget, hist, B, T, lead):
    """Incremental search deciding candidates with :func:`_decide`.

    On acceptance the new column and pivot are stored in ``B`` (its new row
    is zero left of the diagonal) and the new row of ``T`` is completed, so
    the state is the same as after a literal grow.
    """
    n = A.shape[0]
    st = _rebuild(A, S, s, B, T, lead)
    if st != STATUS_DONE:
        return st, s, k, 0
    visits = 0
    while True:
        if k < n and s < max_depth:
            st, x, _ = _decide(A, S, s, k, B, T, lead, True)
            if st != STATUS_DONE:
                return st, s, k, visits
            if x > 0:
                for i in range(s):
                    B[i, s] = lead[i]
                    B[s, i] = 0
                B[s, s] = x
                st = _grow_t(s, B, T, lead)
                if st != STATUS_DONE:
                    return st, s, k, visits
                S[s] = k
                s += 1
                hist[s] += 1
                visits += 1
                k += 1
                if visits >= budget:
                    return STATUS_PAUSED, s, k, visits
            else:
                k += 1
        else:
            if s <= floor:
                return STATUS_DONE, s, k, visits
            s -= 1
            k = S[s] + 1


@njit(nogil=True, cache=True)
def search_incremental_literal(A, S, s, floor, k, max_depth, budget, hist, B, T, lead):
    """Incremental search running every grow step exactly as written (G2-G4)."""
    n = A.shape[0]
    st = _rebuild(A, S, s, B, T, lead)
    if st != STATUS_DONE:
        return st, s, k, 0
    visits = 0
    while True:
        if k < n and s < max_depth:
            st = _new_column(A, S, s, k, B, T)
            if st != STATUS_DONE:
                return st, s, k, visits
            st = _grow_b(A, S, s, k, B, lead)
            if st != STATUS_DONE:
                return st, s, k, visits
            if B[s, s] > 0:
                # accepted: finish T so the state can be extended further
                st = _grow_t(s, B, T, lead)
                if st != STATUS_DONE:
                    return st, s, k, visits
                S[s] = k
                s += 1
                hist[s] += 1
                visits += 1
                k += 1
                if visits >= budget:
                    return STATUS_PAUSED, s, k, visits
            else:
                k += 1
        else:
            if s <= floor:
                return STATUS_DONE, s, k, visits
            s -= 1
            k = S[s] + 1


@njit(nogil=True, cache=True)
def _posdef_from_scratch(A, S, s, k, M):
    """Sylvester test on A[S[:s] + [k]] by one-shot Bareiss elimination."""
    m = s + 1
    for i in range(s):
        for j in range(s):
            M[i, j] = A[S[i], S[j]]
        M[i, s] = A[S[i], k]
        M[s, i] = A[k, S[i]]
    M[s, s] = A[k, k]
    prev = 1
    for i in range(m):
        piv = M[i, i]
        if piv <= 0:
            return 0
        for r in range(i + 1, m):
            ld = M[r, i]
            for c in range(i + 1, m):
                v, st = _cross_div(M[r, c], piv, M[i, c], ld, prev)
                if st != STATUS_DONE:
                    return -st
                M[r, c] = v
        prev = piv
    return 1


@njit(nogil=True, cache=True)
def search_from_scratch(A, S, s, floor, k, max_depth, budget, hist, M):
    n = A.shape[0]
    visits = 0
    while True:
        if k < n and s < max_depth:
            ok = _posdef_from_scratch(A, S, s, k, M)
            if ok < 0:
                return -ok, s, k, visits
            if ok == 1:
                S[s] = k
                s += 1
                hist[s] += 1
                visits += 1
                k += 1
                if visits >= budget:
                    return STATUS_PAUSED, s, k, visits
            else:
                k += 1
        else:
            if s <= floor:
                return STATUS_DONE, s, k, visits
            s -= 1
            k = S[s] + 1


def workspace(n: int):
    """Scratch arrays for one search: S, hist, B, T, lead."""
    return (
        np.zeros(n + 1, dtype=np.int64),
        np.zeros(n + 2, dtype=np.int64),
        np.zeros((n + 1, n + 1), dtype=np.int64),
        np.zeros((n + 1, n + 1), dtype=np.int64),
        np.zeros(n + 1, dtype=np.int64),
    )
