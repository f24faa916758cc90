"""Exact integer linear algebra for symmetric matrices.

Everything here works over Python integers.  Fixed-width behaviour is
emulated: with ``width=64`` (the default) every intermediate value of an
elimination is checked against the signed 64-bit range and an
:class:`~zchambers.errors.ArithmeticOverflow` is raised instead of wrapping.
Pass ``width=None`` to run with unbounded integers.

Indices at the public surface are 1-based, matching the matrix text format.
"""

from __future__ import annotations

import hashlib
import io
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    ArithmeticOverflow,
    InternalConsistencyError,
    MatrixFormatError,
    PreconditionError,
)

DEFAULT_WIDTH = 64


def _bounds(width: int | None) -> tuple[int, int] | None:
    if width is None:
        return None
    return -(1 << (width - 1)), (1 << (width - 1)) - 1


def _checker(width: int | None, operation: str):
    """Return a function that passes a value through if it fits ``width``."""
    bounds = _bounds(width)
    if bounds is None:
        return lambda x: x
    lo, hi = bounds

    def check(x: int) -> int:
        if x < lo or x > hi:
            raise ArithmeticOverflow(operation, x, width)
        return x

    return check


def exact_div(x: int, d: int, operation: str = "Bareiss division") -> int:
    """Divide ``x`` by ``d`` and insist on a zero remainder."""
    if d == 0:
        raise InternalConsistencyError(f"{operation}: division by zero pivot")
    q, r = divmod(x, d)
    if r:
        raise InternalConsistencyError(f"{operation}: {x} is not divisible by {d}")
    return q


class SymmetricIntMatrix:
    """Immutable dense symmetric matrix of exact integers."""

    __slots__ = ("_rows", "_digest")

    def __init__(self, rows: Iterable[Iterable[int]]):
        data = tuple(tuple(int(v) for v in row) for row in rows)
        n = len(data)
        if n < 1:
            raise MatrixFormatError("matrix dimension must be at least 1")
        for i, row in enumerate(data):
            if len(row) != n:
                raise MatrixFormatError(
                    f"row {i + 1} has {len(row)} entries, expected {n}"
                )
        for i in range(n):
            for j in range(i + 1, n):
                if data[i][j] != data[j][i]:
                    raise MatrixFormatError(
                        f"matrix is not symmetric at ({i + 1},{j + 1}): "
                        f"{data[i][j]} != {data[j][i]}"
                    )
        self._rows = data
        self._digest: str | None = None

    @property
    def n(self) -> int:
        return len(self._rows)

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        """0-based row tuples, for internal consumers."""
        return self._rows

    def entry(self, i: int, j: int) -> int:
        """Entry at 1-based position (i, j)."""
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise IndexError(f"({i},{j}) outside a {self.n}x{self.n} matrix")
        return self._rows[i - 1][j - 1]

    def principal(self, subset: Sequence[int]) -> list[list[int]]:
        """The principal submatrix on 1-based ``subset`` as nested lists."""
        idx = [i - 1 for i in subset]
        return [[self._rows[i][j] for j in idx] for i in idx]

    def submatrix(self, subset: Sequence[int]) -> "SymmetricIntMatrix":
        return SymmetricIntMatrix(self.principal(subset))

    def leading(self, k: int) -> "SymmetricIntMatrix":
        """Leading k x k principal submatrix."""
        if not 1 <= k <= self.n:
            raise PreconditionError(f"prefix {k} outside 1..{self.n}")
        return SymmetricIntMatrix(row[:k] for row in self._rows[:k])

    def negated(self) -> "SymmetricIntMatrix":
        return SymmetricIntMatrix((-v for v in row) for row in self._rows)

    def to_lists(self) -> list[list[int]]:
        return [list(row) for row in self._rows]

    def to_numpy(self):
        import numpy as np

        return np.array(self._rows, dtype=np.int64)

    def max_abs(self) -> int:
        return max(abs(v) for row in self._rows for v in row)

    def digest(self) -> str:
        """SHA-256 of the canonical text form; identifies the matrix in checkpoints."""
        if self._digest is None:
            self._digest = hashlib.sha256(dumps_matrix(self).encode()).hexdigest()
        return self._digest

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymmetricIntMatrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        if self.n <= 6:
            return f"SymmetricIntMatrix({self.to_lists()!r})"
        return f"<SymmetricIntMatrix n={self.n} sha256={self.digest()[:12]}>"


# -- text format -------------------------------------------------------------


def dumps_matrix(matrix: SymmetricIntMatrix) -> str:
    out = io.StringIO()
    out.write(f"{matrix.n}\n")
    for row in matrix.rows:
        out.write(" ".join(str(v) for v in row))
        out.write("\n")
    return out.getvalue()


def loads_matrix(text: str) -> SymmetricIntMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MatrixFormatError("empty matrix file")
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise MatrixFormatError(f"first line must be the dimension, got {lines[0]!r}")
    if n < 1:
        raise MatrixFormatError(f"dimension must be at least 1, got {n}")
    if len(lines) - 1 != n:
        raise MatrixFormatError(f"expected {n} matrix rows, found {len(lines) - 1}")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        try:
            row = [int(tok) for tok in line.split()]
        except ValueError:
            raise MatrixFormatError(f"line {lineno}: non-integer entry")
        if len(row) != n:
            raise MatrixFormatError(f"line {lineno}: expected {n} entries, got {len(row)}")
        rows.append(row)
    return SymmetricIntMatrix(rows)


def load_matrix(path: str | os.PathLike) -> SymmetricIntMatrix:
    with open(path, encoding="utf-8") as fh:
        return loads_matrix(fh.read())


def save_matrix(matrix: SymmetricIntMatrix, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_matrix(matrix))


# -- incremental Bareiss state -------------------------------------------------


class EliminationState:
    """Backtracking state: index set ``S``, Bareiss form ``B`` and ``T``.

    ``B`` is the fraction-free upper triangularisation of the principal
    submatrix ``A_S`` and ``T`` the lower triangular matrix with
    ``B == T @ A_S``.  :meth:`grow` appends one index at cost O(s^2),
    :meth:`shrink` drops the largest one, :meth:`is_pos_def` is a sign test.

    The state is mutated in place; each method also returns ``self`` so calls
    can be chained.
    """

    def __init__(self, A: SymmetricIntMatrix, width: int | None = DEFAULT_WIDTH):
        self.A = A
        self.width = width
        self.S: list[int] = []
        self.B: list[list[int]] = []
        self.T: list[list[int]] = []
        self._check = _checker(width, "incremental Bareiss update")

    @classmethod
    def from_subset(
        cls, A: SymmetricIntMatrix, subset: Sequence[int], width: int | None = DEFAULT_WIDTH
    ) -> "EliminationState":
        state = cls(A, width)
        for k in subset:
            state.grow(k)
        return state

    @property
    def size(self) -> int:
        return len(self.S)

    def copy(self) -> "EliminationState":
        other = EliminationState(self.A, self.width)
        other.S = list(self.S)
        other.B = [list(r) for r in self.B]
        other.T = [list(r) for r in self.T]
        return other

    def grow(self, k: int) -> "EliminationState":
        """Append the 1-based index ``k`` (which must exceed ``max(S)``)."""
        A = self.A.rows
        n = len(A)
        if not 1 <= k <= n:
            raise PreconditionError(f"index {k} outside 1..{n}")
        if self.S and k <= self.S[-1]:
            raise PreconditionError(f"index {k} does not exceed max(S) = {self.S[-1]}")
        chk = self._check
        B, T = self.B, self.T
        s = len(self.S)  # 0-based position of the new row/column
        for i in range(s):
            if B[i][i] == 0:
                raise InternalConsistencyError(f"zero pivot at position {i + 1}")
        kk = k - 1
        arow = A[kk]
        col = [arow[j - 1] for j in self.S]

        # new column of B is T @ (A_S column); T is lower triangular
        for r in range(s):
            Tr = T[r]
            acc = 0
            for j in range(r + 1):
                acc = chk(acc + chk(Tr[j] * col[j]))
            B[r].append(acc)
        for r in range(s):
            T[r].append(0)
        last = col + [arow[kk]]
        tlast = [0] * s + [1]

        # clear the new last row
        for i in range(s):
            d = 1 if i == 0 else B[i - 1][i - 1]
            piv = B[i][i]
            lead = last[i]
            Bi = B[i]
            for j in range(i + 1, s + 1):
                num = chk(chk(last[j] * piv) - chk(Bi[j] * lead))
                last[j] = exact_div(num, d)
            Ti = T[i]
            for j in range(s + 1):
                num = chk(chk(tlast[j] * piv) - chk(Ti[j] * lead))
                tlast[j] = exact_div(num, d)
            last[i] = 0
        B.append(last)
        T.append(tlast)
        self.S.append(k)
        return self

    def shrink(self) -> "EliminationState":
        if not self.S:
            raise PreconditionError("shrink called on an empty index set")
        self.S.pop()
        self.B.pop()
        self.T.pop()
        for r in self.B:
            r.pop()
        for r in self.T:
            r.pop()
        return self

    def is_pos_def(self) -> bool:
        """Whether ``A_S`` is positive definite, given a positive definite prefix."""
        if not self.S:
            raise PreconditionError("is_pos_def needs a nonempty index set")
        return self.B[-1][-1] > 0

    def last_pivot(self) -> int:
        """``det(A_S)``, read off the lower right entry of ``B``."""
        return self.B[-1][-1] if self.S else 1

    def check_invariants(self) -> None:
        """Assert ``B == T @ A_S``, triangularity and the Bareiss diagonal."""
        s = len(self.S)
        AS = self.A.principal(self.S)
        for i in range(s):
            for j in range(s):
                if i > j and self.B[i][j] != 0:
                    raise InternalConsistencyError(f"B[{i + 1}][{j + 1}] is not zero")
                if i < j and self.T[i][j] != 0:
                    raise InternalConsistencyError(f"T[{i + 1}][{j + 1}] is not zero")
                prod = sum(self.T[i][t] * AS[t][j] for t in range(s))
                if prod != self.B[i][j]:
                    raise InternalConsistencyError(
                        f"(T A_S)[{i + 1}][{j + 1}] = {prod} but B has {self.B[i][j]}"
                    )

    def __repr__(self) -> str:
        return f"EliminationState(S={self.S}, B={self.B}, T={self.T})"


def grow(state: EliminationState, k: int) -> EliminationState:
    return state.grow(k)


def shrink(state: EliminationState) -> EliminationState:
    return state.shrink()


def is_pos_def(state: EliminationState) -> bool:
    return state.is_pos_def()


# -- one-shot fraction-free routines ----------------------------------------------


def _as_lists(M) -> list[list[int]]:
    if isinstance(M, SymmetricIntMatrix):
        return M.to_lists()
    rows = [[int(v) for v in row] for row in M]
    for row in rows:
        if len(row) != len(rows):
            raise PreconditionError("matrix must be square")
    return rows


def det_fraction_free(M, width: int | None = DEFAULT_WIDTH) -> int:
    """Determinant by Bareiss elimination with row pivoting."""
    a = _as_lists(M)
    n = len(a)
    if n == 0:
        return 1
    chk = _checker(width, "fraction-free determinant")
    sign = 1
    prev = 1
    for i in range(n - 1):
        if a[i][i] == 0:
            for r in range(i + 1, n):
                if a[r][i] != 0:
                    a[i], a[r] = a[r], a[i]
                    sign = -sign
                    break
            else:
                return 0
        piv = a[i][i]
        for r in range(i + 1, n):
            ar = a[r]
            lead = ar[i]
            for c in range(i + 1, n):
                ar[c] = exact_div(chk(chk(ar[c] * piv) - chk(a[i][c] * lead)), prev)
            ar[i] = 0
        prev = piv
    return chk(sign * a[n - 1][n - 1])


def leading_minors(M, width: int | None = DEFAULT_WIDTH) -> list[int]:
    """All leading principal minors, by Bareiss elimination without pivoting.

    Stops early (returning a shorter list ending in 0) when a minor vanishes,
    since further pivots are then undefined without pivoting.
    """
    a = _as_lists(M)
    n = len(a)
    chk = _checker(width, "leading principal minors")
    minors: list[int] = []
    prev = 1
    for i in range(n):
        piv = a[i][i]
        minors.append(piv)
        if piv == 0:
            break
        for r in range(i + 1, n):
            ar = a[r]
            lead = ar[i]
            for c in range(i + 1, n):
                ar[c] = exact_div(chk(chk(ar[c] * piv) - chk(a[i][c] * lead)), prev)
        prev = piv
    return minors


def leading_minors_all_positive(M, width: int | None = DEFAULT_WIDTH) -> bool:
    """Sylvester's criterion: positive definite iff every leading minor is > 0."""
    a = _as_lists(M)
    n = len(a)
    chk = _checker(width, "leading principal minors")
    prev = 1
    for i in range(n):
        piv = a[i][i]
        if piv <= 0:
            return False
        for r in range(i + 1, n):
            ar = a[r]
            lead = ar[i]
            for c in range(i + 1, n):
                ar[c] = exact_div(chk(chk(ar[c] * piv) - chk(a[i][c] * lead)), prev)
        prev = piv
    return True


def rank_exact(M, width: int | None = DEFAULT_WIDTH) -> int:
    """Rank over the rationals via fraction-free elimination with full pivoting."""
    a = _as_lists(M)
    n = len(a)
    if n == 0:
        return 0
    m = len(a[0])
    chk = _checker(width, "fraction-free rank")
    prev = 1
    rank = 0
    for i in range(min(n, m)):
        pivot = None
        for r in range(i, n):
            for c in range(i, m):
                if a[r][c] != 0:
                    pivot = (r, c)
                    break
            if pivot:
                break
        if pivot is None:
            break
        r, c = pivot
        a[i], a[r] = a[r], a[i]
        if c != i:
            for row in a:
                row[i], row[c] = row[c], row[i]
        piv = a[i][i]
        for r in range(i + 1, n):
            ar = a[r]
            lead = ar[i]
            for c in range(i + 1, m):
                ar[c] = exact_div(chk(chk(ar[c] * piv) - chk(a[i][c] * lead)), prev)
            ar[i] = 0
        prev = piv
        rank += 1
    return rank


@dataclass(frozen=True)
class LatticeInvariants:
    dimension: int
    rank: int
    discriminant: int | None = None


def lattice_invariants(
    gram: SymmetricIntMatrix,
    basis: Sequence[int] | None = None,
    width: int | None = DEFAULT_WIDTH,
) -> LatticeInvariants:
    """Rank of ``gram`` and, if ``basis`` (1-based) is given, its discriminant.

    The discriminant is only reported when the basis has exactly ``rank``
    elements; otherwise it would not describe a basis of the lattice.
    """
    rank = rank_exact(gram, width)
    disc = None
    if basis is not None:
        if len(basis) != rank:
            raise PreconditionError(
                f"basis has {len(basis)} elements but the lattice has rank {rank}"
            )
        disc = det_fraction_free(gram.principal(basis), width)
    return LatticeInvariants(dimension=gram.n, rank=rank, discriminant=disc)
