from __future__ import annotations

from ..errors import PreconditionError
from ..exact_linalg import SymmetricIntMatrix


def build_fermat_tridiagonal(n: int) -> SymmetricIntMatrix:
    """n x n matrix with -2 on the diagonal, 1 on the off-diagonals, 0 elsewhere.

    A chain of n (-2)-curves, each meeting its neighbours once.
    """
    if n < 1:
        raise PreconditionError(f"dimension must be at least 1, got {n}")
    return SymmetricIntMatrix(
        [[-2 if i == j else (1 if abs(i - j) == 1 else 0) for j in range(n)] for i in range(n)]
    )
