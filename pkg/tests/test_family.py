from __future__ import annotations

from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from steinpoly.chaos import expect_poly, normal_product
from steinpoly.exact import Poly
from steinpoly.family import (
    appendix_a_golden,
    coeff_by_recursion,
    coeff_closed_form,
    constant_term_identity,
    euler_numbers,
    family_json,
    generate_family,
    generating_function_coeffs,
    hermite_family,
    lowering_apply,
    make_ou_op,
    make_stein_op_d2,
    pde_residuals,
    sheffer_generating_coeffs,
    sheffer_pair,
    stein_family,
    stein_poly,
    three_term_fit,
    w_poly,
)

X = Poly.x()
R = make_stein_op_d2()


def euler_by_recurrence(n_max: int) -> list[int]:
    """E_0..E_n_max from sum_k C(n, k) E_k = 0 (n even, n >= 2); odd ones vanish."""
    e = [0] * (n_max + 1)
    e[0] = 1
    for n in range(2, n_max + 1, 2):
        e[n] = -sum(comb(n, k) * e[k] for k in range(0, n, 2))
    return e


def test_first_members_by_hand():
    fam = stein_family(6)
    assert fam[0] == Poly([1])
    assert fam[1] == X
    assert fam[2] == Poly([-1, 0, 1])
    assert fam[3] == Poly([0, -5, 0, 1])
    assert fam[4] == Poly([5, 0, -14, 0, 1])
    assert fam[6].pretty() == "x^6 - 55x^4 + 331x^2 - 61"


def test_family_zero_length():
    assert generate_family(R, 0).polys == (Poly([1]),)


def test_tabulated_members_through_degree_14():
    built = generate_family(R, 15)
    golden = appendix_a_golden()
    assert len(golden) == 16
    for n in range(15):
        assert built[n] == golden[n], n


def test_degree_15_member_confirmed_independently():
    p15, p14 = stein_poly(15), stein_poly(14)
    # lowering, generating function and the expectation identity all agree with R P_14
    assert lowering_apply(p15) == p14.scale(15)
    assert generating_function_coeffs(15)[15] == p15
    elem = normal_product()
    assert expect_poly(elem, X * p15) == 2 * expect_poly(elem, X * p14.derivative())
    a = coeff_by_recursion(15)
    assert a[15][1] == a[14][0] - 4 * a[14][2] == -19391512145
    assert a[15][3] == a[14][2] - 16 * a[14][4] == 64108947631


def test_tabulated_degree_15_differs_in_two_coefficients():
    golden, built = appendix_a_golden()[15], stein_poly(15)
    diff = {k for k in range(16) if golden[k] != built[k]}
    assert diff == {1, 3}


def test_hermite_family():
    fam = generate_family(make_ou_op(), 4)
    assert fam[3] == Poly([0, -3, 0, 1])
    assert fam[4] == Poly([3, 0, -6, 0, 1])
    assert hermite_family(4)[4] == fam[4]


def test_coefficient_examples():
    a = coeff_by_recursion(8)
    assert a[6][2] == 331 and a[4][0] == 5
    assert all(a[n][n] == 1 for n in range(9))
    assert coeff_closed_form(6, 0) == -61
    assert coeff_closed_form(7, 2) == 0


def test_three_way_agreement_to_degree_30():
    fam = generate_family(R, 30)
    a = coeff_by_recursion(30)
    for n in range(31):
        for k in range(n + 1):
            assert fam.coeff(n, k) == a[n][k] == coeff_closed_form(n, k)


@given(st.integers(0, 40))
def test_parity_and_monic(n):
    p = stein_poly(n) if n <= 16 else stein_family(n)[n]
    assert p.leading == 1 and p.degree == n
    assert p.is_even() if n % 2 == 0 else p.is_odd()


def test_constant_term_identity():
    for n in range(2, 21, 2):
        row = constant_term_identity(n)
        assert row["with_boundary_term_holds"]
        assert not row["alternating_sum_holds"]
    rows = [constant_term_identity(n) for n in (2, 4, 6)]
    assert [r["alternating_sum"] for r in rows] == [0, 4, -60]
    assert [r["a_n0"] for r in rows] == [-1, 5, -61]


def test_euler_numbers():
    e = euler_numbers(24)
    assert e[0] == 1 and e[6] == -61 and e[8] == 1385
    assert e == euler_by_recurrence(24)
    for n in range(13):
        assert stein_poly(2 * n)[0] == e[2 * n] if 2 * n <= 16 else stein_family(24)[2 * n][0] == e[2 * n]


def test_generating_function():
    g = generating_function_coeffs(12)
    assert g[0] == Poly([1])
    assert g[6] == stein_poly(6)
    assert all(g[n].degree == n for n in range(13))
    assert all(g[n] == stein_poly(n) for n in range(13))
    assert all(r.is_zero() for r in pde_residuals(12))


def test_sheffer_pair_reproduces_family():
    pair = sheffer_pair(10)
    assert pair.fbar.compose(pair.f) == pair.f.compose(pair.fbar)
    assert sheffer_generating_coeffs(pair) == [stein_poly(n) for n in range(11)]


def test_lowering_operator():
    assert lowering_apply(stein_poly(6)) == stein_poly(5).scale(6)
    assert lowering_apply(X) == Poly([1])
    assert lowering_apply(Poly.monomial(3)) == Poly([2, 0, 3])
    for n in range(1, 16):
        assert lowering_apply(stein_poly(n)) == stein_poly(n - 1).scale(n)
    with pytest.raises(ValueError):
        lowering_apply(Poly.monomial(5), order=3)


def test_w_poly():
    assert w_poly(2) == Poly([3, 0, -6, 0, 1])
    assert all(w_poly(k).leading == 1 for k in range(2, 7))
    m = [1, 0, 1, 0, 3]
    assert sum(c * m[k] for k, c in enumerate(w_poly(2).coeffs)) == 0
    with pytest.raises(ValueError):
        w_poly(1)


def test_three_term_fit():
    fam = stein_family(6)
    f1, f2, f3 = (three_term_fit(fam, n) for n in (1, 2, 3))
    assert f1.consistent and (f1.c, f1.d) == (0, 1)
    assert f2.consistent and (f2.c, f2.d) == (0, 4)
    assert not f3.consistent
    assert f3.demands == {0: 5, 2: 9}
    h = three_term_fit(hermite_family(5), 3)
    assert h.consistent and (h.c, h.d) == (0, 3)


@given(st.integers(1, 12))
def test_lemma_first_identity(n):
    p, q = stein_poly(n - 1), stein_poly(n)
    assert R(p.derivative()) == p.derivative(2) - p + q.derivative()


@given(st.integers(0, 10), st.integers(0, 10))
def test_product_rule_for_operator(n, m):
    a, b = stein_poly(n), stein_poly(m)
    assert R(a * b) == a * R(b) + b * R(a) - (2 * X * a.derivative() * b.derivative() + X * a * b)


def test_family_json_shape():
    rows = family_json(stein_family(2))
    assert rows[2] == {"n": 2, "coeffs": ["-1/1", "0/1", "1/1"]}
