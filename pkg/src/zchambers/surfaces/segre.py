"""The 64 lines on the quartic x0(x0^3 - x1^3) = x2(x2^3 - x3^3).

Lines are kept as two linear forms with exact coefficients in Q(zeta_12).
Ordering of the 64 lines (1-based):

* 1..16: first type ``L(s,t)``, s = 1..4 outer, t = 1..4 inner;
* 17..64: second type ``L(Z^k T_j, lambda_m)``, k = 0..2 outer,
  m = 0..3 middle, j = 1..4 inner.

Two distinct lines meet iff the 4x4 matrix of their stacked forms is
singular; that determinant test builds the matrix.  :func:`segre_entry_closed_form`
evaluates the published delta formulas independently, as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations

from ..errors import PreconditionError
from ..exact_linalg import SymmetricIntMatrix
from .cyclotomic import ETA, ONE, XI, ZERO, CyclotomicNumber, i_pow, xi_pow

Cyc = CyclotomicNumber
Form = tuple[Cyc, Cyc, Cyc, Cyc]

# the tuple (0, 1, xi, xi^2) locating the points on the two coordinate lines
A_TUPLE = (ZERO, ONE, XI, XI * XI)


@dataclass(frozen=True)
class LineInP3:
    """Line as the common zero set of two linear forms."""

    rows: tuple[Form, Form]
    kind: str  # "first" or "second"
    label: tuple[int, ...]  # (s, t) or (k, j, m)

    @property
    def name(self) -> str:
        if self.kind == "first":
            return "L_{%d,%d}" % self.label
        k, j, m = self.label
        return f"L_{{Z^{k}T_{j},lambda_{m}}}"

    def plucker(self) -> tuple[Cyc, ...]:
        """2x2 minors p01, p02, p03, p12, p13, p23 of the coefficient matrix."""
        a, b = self.rows
        return tuple(a[i] * b[j] - a[j] * b[i] for i, j in _PAIRS)

    def has_rank_two(self) -> bool:
        return any(not p.is_zero() for p in self.plucker())

    def same_line(self, other: "LineInP3") -> bool:
        p, q = self.plucker(), other.plucker()
        return all((p[i] * q[j] - p[j] * q[i]).is_zero() for i in range(6) for j in range(i + 1, 6))

    def spanning_points(self) -> tuple[Form, Form]:
        """Two points spanning the line (a basis of the kernel of ``rows``)."""
        return _kernel_2x4(self.rows)


_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def _kernel_2x4(rows: tuple[Form, Form]) -> tuple[Form, Form]:
    m = [list(rows[0]), list(rows[1])]
    pivots = []
    r = 0
    for c in range(4):
        if r == 2:
            break
        piv = next((i for i in range(r, 2) if not m[i][c].is_zero()), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(2):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    if len(pivots) != 2:
        raise PreconditionError("linear forms are dependent; not a line")
    free = [c for c in range(4) if c not in pivots]
    basis = []
    for fcol in free:
        v = [ZERO] * 4
        v[fcol] = ONE
        for row, pc in zip(m, pivots):
            v[pc] = -row[fcol]
        basis.append(tuple(v))
    return basis[0], basis[1]


# -- the tetrahedral group and its lambda factors ---------------------------------

T_MATRICES = {
    1: ((ONE, ZERO), (ZERO, ONE)),
    2: ((-ONE, XI), (2 * XI * XI, ONE)),
    3: ((-ONE, XI * XI), (2 * XI, ONE)),
    4: ((-ONE, ONE), (Cyc.coerce(2), ONE)),
}
Z_MATRIX = ((XI, ZERO), (ZERO, ONE))

_X2 = XI * XI
# (k, j) -> (matrix of Z^k T_j, base factor); lambda_m = i^m * base
AUTOMORPHISM_TABLE: dict[tuple[int, int], tuple[tuple[tuple[Cyc, Cyc], tuple[Cyc, Cyc]], Cyc]] = {
    (0, 1): (((ONE, ZERO), (ZERO, ONE)), ONE),
    (1, 1): (((XI, ZERO), (ZERO, ONE)), _X2),
    (2, 1): (((_X2, ZERO), (ZERO, ONE)), XI),
    (0, 2): (((-ONE, XI), (2 * _X2, ONE)), ETA),
    (1, 2): (((-XI, _X2), (2 * _X2, ONE)), ETA * _X2),
    (2, 2): (((-_X2, ONE), (2 * _X2, ONE)), ETA * XI),
    (0, 3): (((-ONE, _X2), (2 * XI, ONE)), ETA),
    (1, 3): (((-XI, ONE), (2 * XI, ONE)), ETA * _X2),
    (2, 3): (((-_X2, XI), (2 * XI, ONE)), ETA * XI),
    (0, 4): (((-ONE, ONE), (2 * ONE, ONE)), ETA),
    (1, 4): (((-XI, XI), (2 * ONE, ONE)), ETA * _X2),
    (2, 4): (((-_X2, _X2), (2 * ONE, ONE)), ETA * XI),
}


def mat_mul(P, Q):
    return tuple(
        tuple(P[r][0] * Q[0][c] + P[r][1] * Q[1][c] for c in range(2)) for r in range(2)
    )


def lambda_factor(k: int, j: int, m: int) -> Cyc:
    return i_pow(m) * AUTOMORPHISM_TABLE[(k, j)][1]


def phi(x: Cyc, y: Cyc) -> Cyc:
    """The binary quartic x(x^3 - y^3) defining both halves of the surface."""
    return x * (x * x * x - y * y * y)


def lambda_condition_holds(k: int, j: int, m: int) -> bool:
    """lambda^4 * phi(gamma(1, 0)) == phi(1, 0) for gamma = Z^k T_j."""
    (a, _b), (c, _d) = AUTOMORPHISM_TABLE[(k, j)][0]
    lam = lambda_factor(k, j, m)
    return lam**4 * phi(a, c) == phi(ONE, ZERO)


# -- the lines -----------------------------------------------------------------


def first_type_line(s: int, t: int) -> LineInP3:
    rows = ((-ONE, A_TUPLE[s - 1], ZERO, ZERO), (ZERO, ZERO, -ONE, A_TUPLE[t - 1]))
    return LineInP3(rows, "first", (s, t))


def second_type_line(k: int, j: int, m: int) -> LineInP3:
    (a, b), (c, d) = AUTOMORPHISM_TABLE[(k, j)][0]
    lam = lambda_factor(k, j, m)
    rows = ((lam * a, lam * b, -ONE, ZERO), (lam * c, lam * d, ZERO, -ONE))
    return LineInP3(rows, "second", (k, j, m))


def first_type_index(s: int, t: int) -> int:
    return (s - 1) * 4 + t


def second_type_index(k: int, j: int, m: int) -> int:
    return 16 + k * 16 + m * 4 + j


@lru_cache(maxsize=1)
def build_segre_lines() -> tuple[LineInP3, ...]:
    lines = [first_type_line(s, t) for s in range(1, 5) for t in range(1, 5)]
    lines += [
        second_type_line(k, j, m) for k in range(3) for m in range(4) for j in range(1, 5)
    ]
    return tuple(lines)


def surface_equation(x: Form) -> Cyc:
    x0, x1, x2, x3 = x
    return phi(x0, x1) - phi(x2, x3)


def restriction_to_line(line: LineInP3) -> list[Cyc]:
    """Coefficients of F(u p + v q) as a binary quartic in (u, v).

    The line lies on the surface iff all five coefficients vanish.
    """
    p, q = line.spanning_points()
    forms = [(p[i], q[i]) for i in range(4)]  # x_i = p_i u + q_i v

    def mul(f, g):
        out = [ZERO] * (len(f) + len(g) - 1)
        for a, x in enumerate(f):
            for b, y in enumerate(g):
                out[a + b] = out[a + b] + x * y
        return out

    def quartic_phi(fx, fy):
        cube_x = mul(mul(fx, fx), fx)
        cube_y = mul(mul(fy, fy), fy)
        return mul(fx, [a - b for a, b in zip(cube_x, cube_y)])

    left = quartic_phi(forms[0], forms[1])
    right = quartic_phi(forms[2], forms[3])
    return [a - b for a, b in zip(left, right)]


def lies_on_surface(line: LineInP3) -> bool:
    return all(c.is_zero() for c in restriction_to_line(line))


# -- intersections -------------------------------------------------------------


def det4(m) -> Cyc:
    """Determinant of a 4x4 matrix by the Leibniz formula."""
    total = ZERO
    for perm in permutations(range(4)):
        sign = 1
        for a in range(4):
            for b in range(a + 1, 4):
                if perm[a] > perm[b]:
                    sign = -sign
        term = m[0][perm[0]] * m[1][perm[1]] * m[2][perm[2]] * m[3][perm[3]]
        total = total + term if sign > 0 else total - term
    return total


def lines_intersect(L1: LineInP3, L2: LineInP3) -> int:
    """1 if two distinct lines meet, else 0 (exact singularity test)."""
    if L1.same_line(L2):
        raise PreconditionError(f"{L1.name} and {L2.name} are the same line")
    return 1 if det4(L1.rows + L2.rows).is_zero() else 0


@lru_cache(maxsize=1)
def build_segre_matrix() -> SymmetricIntMatrix:
    lines = build_segre_lines()
    n = len(lines)
    rows = [[0] * n for _ in range(n)]
    for p in range(n):
        rows[p][p] = -2
        for q in range(p + 1, n):
            rows[p][q] = rows[q][p] = lines_intersect(lines[p], lines[q])
    return SymmetricIntMatrix(rows)


def line_label(index: int) -> tuple[str, tuple[int, ...]]:
    """(kind, label) of the 1-based line index."""
    if not 1 <= index <= 64:
        raise PreconditionError(f"line index {index} outside 1..64")
    if index <= 16:
        s, t = divmod(index - 1, 4)
        return "first", (s + 1, t + 1)
    k, r = divmod(index - 17, 16)
    m, j0 = divmod(r, 4)
    return "second", (k, j0 + 1, m)


# named lines generating a rank-20 sublattice
NAMED_SUBLATTICE = tuple(
    [first_type_index(1, t) for t in range(1, 5)]
    + [first_type_index(2, t) for t in range(1, 4)]
    + [first_type_index(3, t) for t in range(1, 4)]
    + [
        second_type_index(k, j, m)
        for (k, j, m) in (
            (1, 1, 0), (2, 1, 0), (1, 2, 0), (2, 2, 0), (1, 3, 0),
            (2, 3, 0), (1, 1, 1), (2, 1, 1), (1, 2, 1), (2, 2, 1),
        )
    ]
)


# -- closed-form intersection numbers -------------------------------------------


def _delta(x) -> int:
    if isinstance(x, CyclotomicNumber):
        return 1 if x.is_zero() else 0
    return 1 if x == 0 else 0


def _first_second(s: int, t: int, k: int, j: int, m: int) -> int:
    if j != 1 and s != 1 and t != 1:
        return _delta(
            -xi_pow(2 * k + t - 1) + xi_pow(j) - xi_pow(s - 1) - 2 * xi_pow(s + t + 2 * k - j - 2)
        )
    if j != 1 and t != 1 and s == 1:
        return _delta((t + 2 * k - j - 1) % 3)
    if j != 1 and s != 1 and t == 1:
        return _delta((s - 1 - j) % 3)
    if j == 1 and s != 1 and t != 1:
        return _delta((s + k - t) % 3)
    return _delta(s - 1) * _delta(j - 1) * _delta(t - 1)


def _second_second(k: int, j: int, m: int, k2: int, j2: int, m2: int) -> int:
    if j != 1 and j2 != 1:
        w = i_pow(m2 - m)
        return _delta(
            (w - 3) * xi_pow(2 * k)
            + w * (1 - 3 * w) * xi_pow(2 * k2)
            + 2 * w * (xi_pow(2 * k - j + j2) + xi_pow(2 * k2 - j2 + j))
        )
    if j == 1 and j2 != 1:
        return _delta(
            i_pow(2 * m) * xi_pow(2 * k)
            - i_pow(m) * i_pow(m2) * xi_pow(2 * k2) * ETA
            + i_pow(m2) * ETA * i_pow(m) * xi_pow(2 * k)
            - 3 * (i_pow(2 * m2) * ETA * ETA * xi_pow(2 * k2))
        )
    if j != 1 and j2 == 1:
        return _second_second(k2, j2, m2, k, j, m)
    return _delta(m - m2)


def segre_entry_closed_form(p: int, q: int) -> int:
    """Intersection number of distinct lines p, q (1-based) from the delta formulas."""
    if p == q:
        raise PreconditionError("closed form is for distinct lines")
    kp, lp = line_label(p)
    kq, lq = line_label(q)
    if kp == "first" and kq == "first":
        (i, j), (i2, j2) = lp, lq
        return _delta(i - i2) + _delta(j - j2)
    if kp == "second" and kq == "first":
        kp, lp, kq, lq = kq, lq, kp, lp
    if kp == "first":
        s, t = lp
        k, j, m = lq
        return _first_second(s, t, k, j, m)
    return _second_second(*lp, *lq)


@dataclass(frozen=True)
class Discrepancy:
    p: int
    q: int
    line_p: str
    line_q: str
    determinant_value: int
    formula_value: int

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "line_p": self.line_p,
            "line_q": self.line_q,
            "determinant": self.determinant_value,
            "formula": self.formula_value,
        }


def closed_form_discrepancies() -> list[Discrepancy]:
    """Pairs where the delta formulas disagree with the determinant test."""
    lines = build_segre_lines()
    M = build_segre_matrix()
    out = []
    for p in range(1, 65):
        for q in range(p + 1, 65):
            det_val = M.entry(p, q)
            formula = segre_entry_closed_form(p, q)
            if formula != det_val:
                out.append(
                    Discrepancy(p, q, lines[p - 1].name, lines[q - 1].name, det_val, formula)
                )
    return out
