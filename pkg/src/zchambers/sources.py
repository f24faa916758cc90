"""Named matrix sources for the command line.

``del-pezzo:<r>``, ``segre-schur``, ``segre-schur:first16`` and
``fermat-tridiag:<n>`` name built-in intersection matrices; anything else is
read as a path in the matrix text format.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .errors import MatrixFormatError, PreconditionError
from .exact_linalg import SymmetricIntMatrix, load_matrix
from .surfaces.del_pezzo import build_del_pezzo
from .surfaces.fermat import build_fermat_tridiagonal
from .surfaces.segre import build_segre_matrix

BUILDER_NAMES = ("del-pezzo:<r>", "segre-schur", "segre-schur:first16", "fermat-tridiag:<n>")

# matrix sizes past which a full count takes hours; need --extended
EXTENDED_LIMITS = {"segre-schur": 40, "fermat-tridiag": 30}


@dataclass(frozen=True)
class Source:
    name: str
    family: str  # builder family, or "file"
    matrix: SymmetricIntMatrix

    @property
    def needs_extended(self) -> bool:
        limit = EXTENDED_LIMITS.get(self.family)
        return limit is not None and self.matrix.n > limit


def _int_arg(spec: str, text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise PreconditionError(f"bad parameter in source {spec!r}") from None


def build_named(spec: str) -> tuple[str, SymmetricIntMatrix] | None:
    head, _, arg = spec.partition(":")
    if head == "del-pezzo" and arg:
        return head, build_del_pezzo(_int_arg(spec, arg))
    if head == "segre-schur":
        if not arg:
            return head, build_segre_matrix()
        if arg == "first16":
            return head, build_segre_matrix().leading(16)
        raise PreconditionError(f"unknown segre-schur variant {arg!r}")
    if head == "fermat-tridiag" and arg:
        return head, build_fermat_tridiagonal(_int_arg(spec, arg))
    return None


def resolve_source(spec: str, prefix: int | None = None) -> Source:
    """Build or load the matrix named by ``spec``; optionally its leading block."""
    named = build_named(spec)
    if named is not None:
        family, matrix = named
    elif os.path.exists(spec):
        family, matrix = "file", load_matrix(spec)
    else:
        raise MatrixFormatError(
            f"{spec!r} is neither a builder ({', '.join(BUILDER_NAMES)}) nor a readable file"
        )
    name = spec
    if prefix is not None:
        if not 1 <= prefix <= matrix.n:
            raise PreconditionError(f"--prefix {prefix} outside 1..{matrix.n}")
        matrix = matrix.leading(prefix)
        name = f"{spec}[:{prefix}]"
    return Source(name, family, matrix)
