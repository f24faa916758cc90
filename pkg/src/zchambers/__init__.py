"""Exact counting of positive definite principal submatrices and Zariski chambers."""

from .chambers.driver import (
    count_posdef,
    count_zariski_chambers,
    enumerate_parallel,
    resume,
)
from .chambers.report import ChamberReport
from .chambers.search import enumerate_posdef, iter_posdef_subsets
from .errors import (
    ArithmeticOverflow,
    CheckpointError,
    InternalConsistencyError,
    PreconditionError,
    ZChambersError,
)
from .exact_linalg import (
    EliminationState,
    SymmetricIntMatrix,
    det_fraction_free,
    leading_minors_all_positive,
    rank_exact,
)
from .oracle import oracle_enumerate

__all__ = [
    "ArithmeticOverflow",
    "ChamberReport",
    "CheckpointError",
    "EliminationState",
    "InternalConsistencyError",
    "PreconditionError",
    "SymmetricIntMatrix",
    "ZChambersError",
    "count_posdef",
    "count_zariski_chambers",
    "det_fraction_free",
    "enumerate_parallel",
    "enumerate_posdef",
    "iter_posdef_subsets",
    "leading_minors_all_positive",
    "oracle_enumerate",
    "rank_exact",
    "resume",
]

__version__ = "0.1.0"
