import cmath
import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zchambers.errors import PreconditionError
from zchambers.exact_linalg import det_fraction_free, rank_exact
from zchambers.oracle import brute_force_posdef
from zchambers.surfaces.cyclotomic import (
    ETA,
    I,
    ONE,
    SQRT3,
    XI,
    ZERO,
    ZETA,
    CyclotomicNumber,
    i_pow,
    xi_pow,
)
from zchambers.surfaces.del_pezzo import CURVE_COUNTS, build_del_pezzo, minus_one_classes
from zchambers.surfaces.fermat import build_fermat_tridiagonal
from zchambers.surfaces.segre import (
    AUTOMORPHISM_TABLE,
    NAMED_SUBLATTICE,
    T_MATRICES,
    Z_MATRIX,
    build_segre_lines,
    build_segre_matrix,
    closed_form_discrepancies,
    det4,
    first_type_index,
    first_type_line,
    lambda_condition_holds,
    lambda_factor,
    line_label,
    lines_intersect,
    lies_on_surface,
    mat_mul,
    phi,
    second_type_index,
    second_type_line,
    segre_entry_closed_form,
)


cyclo = st.builds(
    CyclotomicNumber,
    st.lists(st.fractions(max_denominator=6).filter(lambda f: abs(f) < 50), min_size=4, max_size=4),
)


# -- cyclotomic field ------------------------------------------------------------


def test_constants():
    assert XI**3 == ONE and XI != ONE
    assert I * I == -ONE
    assert SQRT3 * SQRT3 == 3
    assert ETA * 3 == SQRT3
    assert ZETA**12 == ONE and ZETA**6 == -ONE
    assert abs(XI.to_complex() - cmath.exp(2j * cmath.pi / 3)) < 1e-12
    assert abs(SQRT3.to_complex() - 3**0.5) < 1e-12
    assert 1 + XI + XI * XI == ZERO


def test_minimal_polynomial_reduction():
    assert ZETA**4 == ZETA**2 - 1


def test_powers_wrap():
    for e in range(-7, 8):
        assert xi_pow(e) == xi_pow(e % 3)
        assert i_pow(e) == i_pow(e % 4)


@settings(max_examples=200, deadline=None)
@given(cyclo, cyclo, cyclo)
def test_field_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ZERO
    if not a.is_zero():
        assert a * a.inverse() == ONE
        assert (b / a) * a == b


@settings(max_examples=100, deadline=None)
@given(cyclo, cyclo)
def test_embedding_is_a_homomorphism(a, b):
    # dual route: compare with floating point complex arithmetic
    assert abs((a * b).to_complex() - a.to_complex() * b.to_complex()) < 1e-6
    assert abs((a + b).to_complex() - (a.to_complex() + b.to_complex())) < 1e-9


def test_norm_is_rational_and_multiplicative():
    a = CyclotomicNumber([1, 2, 0, -1])
    b = CyclotomicNumber([Fraction(1, 2), 0, 3, 1])
    assert isinstance(a.norm(), Fraction)
    assert (a * b).norm() == a.norm() * b.norm()
    assert ZETA.norm() == 1


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


# -- Segre-Schur lines -----------------------------------------------------------


def test_line_one():
    L = build_segre_lines()[0]
    assert L.label == (1, 1)
    assert L.rows == ((-ONE, ZERO, ZERO, ZERO), (ZERO, ZERO, -ONE, ZERO))


def test_ordering():
    lines = build_segre_lines()
    assert len(lines) == 64
    for s, t in itertools.product(range(1, 5), repeat=2):
        idx = first_type_index(s, t)
        assert lines[idx - 1].label == (s, t) and line_label(idx) == ("first", (s, t))
    # k outer, m middle, j inner
    expected = [(k, j, m) for k in range(3) for m in range(4) for j in range(1, 5)]
    assert [L.label for L in lines[16:]] == expected
    for k, j, m in expected:
        assert line_label(second_type_index(k, j, m)) == ("second", (k, j, m))
    with pytest.raises(PreconditionError):
        line_label(65)


def test_all_lines_on_surface_and_distinct():
    lines = build_segre_lines()
    assert all(L.has_rank_two() for L in lines)
    assert all(lies_on_surface(L) for L in lines)
    for a, b in itertools.combinations(lines, 2):
        assert not a.same_line(b)


def test_lambda_family_condition():
    for k, j in AUTOMORPHISM_TABLE:
        for m in range(4):
            assert lambda_condition_holds(k, j, m)


def test_table_matrices_are_products():
    for (k, j), (mat, _) in AUTOMORPHISM_TABLE.items():
        Zk = ((ONE, ZERO), (ZERO, ONE))
        for _ in range(k):
            Zk = mat_mul(Zk, Z_MATRIX)
        assert mat_mul(Zk, T_MATRICES[j]) == mat


def test_lambda_for_z1_t2():
    for m in range(4):
        assert lambda_factor(1, 2, m) == i_pow(m) * XI * XI * ETA
    assert phi(ONE, ZERO) == ONE
    assert phi(-XI, 2 * XI * XI) == 9 * XI


def test_intersection_examples():
    L12, L13, L34 = first_type_line(1, 2), first_type_line(1, 3), first_type_line(3, 4)
    assert lines_intersect(L12, L13) == 1
    assert lines_intersect(L12, L34) == 0
    with pytest.raises(PreconditionError):
        lines_intersect(L12, first_type_line(1, 2))


def test_first_second_determinant_formula():
    for t, k, j, m in itertools.product((2, 3, 4), range(3), (2, 3, 4), range(4)):
        d = det4(first_type_line(1, t).rows + second_type_line(k, j, m).rows)
        assert d == i_pow(m) * ETA * (xi_pow(j - 1) - xi_pow(2 * k + t - 2))
        meets = (t + 2 * k - j - 1) % 3 == 0
        assert d.is_zero() == meets


def test_det4_against_complex_embedding():
    L1, L2 = first_type_line(2, 3), second_type_line(1, 3, 2)
    rows = L1.rows + L2.rows
    num = [[x.to_complex() for x in r] for r in rows]

    def cdet(m):
        if len(m) == 1:
            return m[0][0]
        return sum((-1) ** j * m[0][j] * cdet([r[:j] + r[j + 1 :] for r in m[1:]]) for j in range(len(m)))

    assert abs(det4(rows).to_complex() - cdet(num)) < 1e-9


def test_matrix_shape():
    M = build_segre_matrix()
    assert M.n == 64
    assert all(M.entry(i, i) == -2 for i in range(1, 65))
    off = {M.entry(i, j) for i in range(1, 65) for j in range(1, 65) if i != j}
    assert off == {0, 1}
    # each line meets 18 others
    assert all(sum(r) + 2 == 18 for r in M.rows)


def test_rank_and_discriminant():
    M = build_segre_matrix()
    assert rank_exact(M, width=None) == 20
    assert len(NAMED_SUBLATTICE) == 20
    assert det_fraction_free(M.principal(NAMED_SUBLATTICE), None) == -48


def test_closed_form_agrees():
    assert closed_form_discrepancies() == []
    assert segre_entry_closed_form(2, 3) == 1
    assert segre_entry_closed_form(2, 12) == 0
    with pytest.raises(PreconditionError):
        segre_entry_closed_form(5, 5)


# -- Del Pezzo and Fermat builders -------------------------------------------------


@pytest.mark.parametrize("r", range(1, 9))
def test_del_pezzo_shape(r):
    M = build_del_pezzo(r)
    assert M.n == CURVE_COUNTS[r - 1]
    assert all(M.entry(i, i) == -1 for i in range(1, M.n + 1))
    assert all(v >= 0 for i, row in enumerate(M.rows) for j, v in enumerate(row) if i != j)
    assert all(c.is_minus_one_class() for c in minus_one_classes(r))


def test_del_pezzo_small():
    assert build_del_pezzo(1).rows == ((-1,),)
    assert build_del_pezzo(8).n == 240
    assert build_del_pezzo(6).n == 27
    with pytest.raises(PreconditionError):
        build_del_pezzo(9)


def test_fermat():
    assert build_fermat_tridiagonal(1).rows == ((-2,),)
    assert build_fermat_tridiagonal(3).rows == ((-2, 1, 0), (1, -2, 1), (0, 1, -2))
    assert len(brute_force_posdef(build_fermat_tridiagonal(3).negated())) == 7


@pytest.mark.slow
def test_fermat_15_brute_force():
    assert len(brute_force_posdef(build_fermat_tridiagonal(15).negated())) + 1 == 32768
