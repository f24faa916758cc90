"""Grid rendering of intersection matrices (one cell per entry).

Distinct entry values are mapped to grey levels in increasing order, so for
the quartic's matrix -2, 0 and 1 become black, grey and white.
"""

from __future__ import annotations

import os

from .exact_linalg import SymmetricIntMatrix

TEXT_GLYPHS = "#+. ~=*"


def value_levels(matrix: SymmetricIntMatrix) -> dict[int, int]:
    values = sorted({v for row in matrix.rows for v in row})
    if len(values) == 1:
        return {values[0]: 0}
    step = 255 / (len(values) - 1)
    return {v: round(i * step) for i, v in enumerate(values)}


def to_pgm(matrix: SymmetricIntMatrix, scale: int = 8) -> str:
    """Plain (P2) PGM image, ``scale`` pixels per cell."""
    levels = value_levels(matrix)
    size = matrix.n * scale
    out = [f"P2\n{size} {size}\n255"]
    for row in matrix.rows:
        line = " ".join(str(levels[v]) for v in row for _ in range(scale))
        out.extend([line] * scale)
    return "\n".join(out) + "\n"


def to_text_grid(matrix: SymmetricIntMatrix) -> str:
    values = sorted(value_levels(matrix))
    if len(values) > len(TEXT_GLYPHS):
        raise ValueError(f"text grid supports at most {len(TEXT_GLYPHS)} distinct entries")
    glyph = {v: TEXT_GLYPHS[i] for i, v in enumerate(values)}
    legend = "  ".join(f"{glyph[v]}={v}" for v in values)
    body = "\n".join("".join(glyph[v] for v in row) for row in matrix.rows)
    return f"{legend}\n{body}\n"


def render_matrix_figure(
    matrix: SymmetricIntMatrix, path: str | os.PathLike, style: str = "pgm", scale: int = 8
) -> None:
    text = to_pgm(matrix, scale) if style == "pgm" else to_text_grid(matrix)
    with open(path, "w", encoding="ascii") as fh:
        fh.write(text)
