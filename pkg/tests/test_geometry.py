from fractions import Fraction

import pytest

from walgebra.geometry import (
    RMatrixElement,
    WonderbolicBasis,
    _det_exact,
    jc_closed_form,
    jc_recursive,
    omega_matrix,
    verify_inverse,
)


def test_wonderbolic_dimensions():
    for N in range(3, 9):
        w = WonderbolicBasis(N)
        assert w.dim() == 2 * len(w.m_basis)
        assert len(w.b_basis) == len(w.m_basis) == N * (N - 1) // 2 - 1


def test_wonderbolic_pattern():
    # zero first two entries of rows 1-2 except the b block, zero last column
    w = WonderbolicBasis(4)
    assert not w.contains(1, 1) and not w.contains(2, 1)
    assert not w.contains(1, 4) and not w.contains(3, 4)
    assert w.contains(1, 2) and w.contains(2, 2) and w.contains(3, 1)


def test_omega_example_n3():
    basis, gram = omega_matrix(3)
    a = basis.index[(3, 1)]
    b = basis.index[(1, 2)]
    # omega(E31, E12) = Tr(e [E31, E12]) = Tr(E23 E32) = 1
    assert gram[a][b] == 1
    for k in range(basis.dim()):
        assert gram[k][k] == 0


def test_omega_column_relation():
    # omega(E_{j,i-1}, E_{i,j}) = -1 and, for j >= 3,
    # omega(E_{j,i-1}, E_{i-1,j-1}) = +1, all other m-pairings zero
    N = 5
    basis, gram = omega_matrix(N)
    for (j, c) in basis.b_basis:
        i = c + 1
        row = gram[basis.index[(j, c)]]
        expected = {}
        if (i, j) in basis.index:
            expected[(i, j)] = Fraction(-1)
        if j >= 3 and (i - 1, j - 1) in basis.index:
            expected[(i - 1, j - 1)] = Fraction(1)
        got = {
            m: row[basis.index[m]]
            for m in basis.m_basis
            if row[basis.index[m]] != 0
        }
        assert got == expected, ((j, c), got, expected)


def test_jc_recursive_base_cases():
    jc = jc_recursive(3)
    # j_c columns: j_c^21(E*_31) = E_12, j_c^21(E*_32) = E_22
    assert jc.terms[((1, 2), (3, 1))] == 1
    assert jc.terms[((2, 2), (3, 2))] == 1
    assert len(jc.terms) == 2


def test_jc_closed_form_n3_n4():
    jc3 = jc_closed_form(3)
    assert jc3.terms == {
        ((2, 2), (3, 2)): Fraction(1),
        ((1, 2), (3, 1)): Fraction(1),
    }
    jc4 = jc_closed_form(4)
    assert jc4.terms[((1, 3), (4, 1))] == 1
    # the (4,3) column picks up both E_22 and E_33
    assert jc4.terms[((2, 2), (4, 3))] == 1
    assert jc4.terms[((3, 3), (4, 3))] == 1


def test_jc_term_count_growth():
    # first family contributes sum_j (j-1)(N-j) terms: cubic growth
    for N in (4, 6, 8):
        jc = jc_closed_form(N)
        expected = sum((j - 1) * (N - j) for j in range(2, N)) + (N - 2)
        assert len(jc.terms) == expected


@pytest.mark.parametrize("N", range(3, 9))
def test_verify_inverse(N):
    rep = verify_inverse(N)
    assert rep["ok"], rep
    assert rep["checks"]["recursive_equals_closed_form"]
    assert rep["checks"]["inverse_on_w"]
    assert rep["checks"]["isotropic_b"] and rep["checks"]["isotropic_m"]
    assert rep["checks"]["nondegenerate"]
    assert rep["checks"]["e_outside_w"]
    assert rep["recursive_vs_closed_diff"] == []


def test_det_exact():
    assert _det_exact([[Fraction(2), Fraction(1)], [Fraction(1), Fraction(1)]]) == 1
    assert _det_exact([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]) == 0


def test_omega_structure_constants_match_matrix_products():
    import random

    from walgebra.geometry import omega_pairing

    rng = random.Random(3)
    for N in (3, 5, 7):
        basis, gram = omega_matrix(N)
        for _ in range(40):
            a = rng.randrange(basis.dim())
            b = rng.randrange(basis.dim())
            x, y = basis.w_basis[a], basis.w_basis[b]
            assert gram[a][b] == omega_pairing(basis.pyramid, x, y)


def test_verify_inverse_runtime():
    import time

    start = time.monotonic()
    for N in range(3, 9):
        assert verify_inverse(N)["ok"]
    assert time.monotonic() - start < 1.0


def test_rmatrix_antisymmetry_by_construction():
    jc = jc_closed_form(5)
    r = jc - jc.swap_legs()
    assert (r + r.swap_legs()).is_zero()
