"""Intersection matrices of negative curves on specific surfaces."""

from .del_pezzo import build_del_pezzo
from .fermat import build_fermat_tridiagonal
from .segre import build_segre_lines, build_segre_matrix, lines_intersect, segre_entry_closed_form

__all__ = [
    "build_del_pezzo",
    "build_fermat_tridiagonal",
    "build_segre_lines",
    "build_segre_matrix",
    "lines_intersect",
    "segre_entry_closed_form",
]
