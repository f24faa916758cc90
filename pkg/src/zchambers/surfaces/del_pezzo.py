"""(-1)-curves on the blow-up of the plane in r general points, 1 <= r <= 8.

A class ``d H - sum m_i E_i`` is stored as ``(d, (m_1, ..., m_r))``; the
exceptional curve ``E_i`` is ``(0, -e_i)``.  The intersection form is
``diag(1, -1, ..., -1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from ..errors import PreconditionError
from ..exact_linalg import SymmetricIntMatrix

# dimension of the matrix for r = 1..8
CURVE_COUNTS = (1, 3, 6, 10, 16, 27, 56, 240)


@dataclass(frozen=True, order=True)
class DelPezzoCurveClass:
    degree: int
    multiplicities: tuple[int, ...]

    def dot(self, other: "DelPezzoCurveClass") -> int:
        return self.degree * other.degree - sum(
            a * b for a, b in zip(self.multiplicities, other.multiplicities)
        )

    @property
    def self_intersection(self) -> int:
        return self.dot(self)

    @property
    def anticanonical_degree(self) -> int:
        """-K . C with -K = 3H - sum E_i."""
        return 3 * self.degree - sum(self.multiplicities)

    def is_minus_one_class(self) -> bool:
        return self.self_intersection == -1 and self.anticanonical_degree == 1

    def __str__(self) -> str:
        terms = [f"{self.degree}H"] if self.degree else []
        for i, m in enumerate(self.multiplicities, start=1):
            if m == -1:
                terms.append(f"+E{i}")
            elif m == 1:
                terms.append(f"-E{i}")
            elif m:
                terms.append(f"-{m}E{i}")
        return "".join(terms).lstrip("+")


def _classes_of_type(r: int, degree: int, pattern: tuple[int, ...]):
    """All classes ``degree*H - sum`` whose multiplicity multiset is ``pattern``.

    ``pattern`` lists the nonzero multiplicities in decreasing order; the
    points carrying them are chosen in lexicographic order of point tuples.
    """
    distinct = sorted(set(pattern), reverse=True)
    groups = [pattern.count(v) for v in distinct]

    def place(avail, gi):
        if gi == len(groups):
            yield {}
            return
        for chosen in combinations(avail, groups[gi]):
            rest = [p for p in avail if p not in chosen]
            for tail in place(rest, gi + 1):
                out = dict(tail)
                for p in chosen:
                    out[p] = distinct[gi]
                yield out

    for assignment in place(list(range(r)), 0):
        mult = tuple(assignment.get(i, 0) for i in range(r))
        yield DelPezzoCurveClass(degree, mult)


# (degree, multiplicities) of the seven types of (-1)-classes
_TYPES = (
    (0, (-1,)),
    (1, (1, 1)),
    (2, (1, 1, 1, 1, 1)),
    (3, (2, 1, 1, 1, 1, 1, 1)),
    (4, (2, 2, 2, 1, 1, 1, 1, 1)),
    (5, (2, 2, 2, 2, 2, 2, 1, 1)),
    (6, (3, 2, 2, 2, 2, 2, 2, 2)),
)


def minus_one_classes(r: int) -> list[DelPezzoCurveClass]:
    if not 1 <= r <= 8:
        raise PreconditionError(f"Del Pezzo surfaces need 1 <= r <= 8, got {r}")
    classes: list[DelPezzoCurveClass] = []
    for degree, pattern in _TYPES:
        if len(pattern) <= r:
            classes.extend(_classes_of_type(r, degree, pattern))
    return classes


def build_del_pezzo(r: int) -> SymmetricIntMatrix:
    """Intersection matrix of all (-1)-curves on the blow-up in r points."""
    classes = minus_one_classes(r)
    return SymmetricIntMatrix([[c.dot(d) for d in classes] for c in classes])
