from __future__ import annotations

from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from steinpoly.chaos import (
    FLOAT_CTX,
    InsufficientOrderError,
    SpectralElement,
    cumulants,
    cumulants_from_moments,
    decompose_in_family,
    double_factorial,
    even_moment_diagnostic,
    expect_poly,
    f8_element,
    gaussian_moments,
    mixture_element,
    mixture_q_poly,
    moments,
    moments_from_cumulants,
    normal_product,
    p6_diagnostic,
    stein_coefficients,
    stein_residuals,
    turan_check,
)
from steinpoly.exact import FieldMismatchError, Poly, QuadRational
from steinpoly.family import make_stein_op_d2, stein_family, stein_poly, w_poly
from steinpoly.numchecks import expect_numeric
from steinpoly.roots import sign_changes, sturm_count

X = Poly.x()
nonzero = st.fractions(min_value=-3, max_value=3, max_denominator=9).filter(lambda q: q != 0)
lambda_vectors = st.lists(nonzero, min_size=1, max_size=5)


def moments_by_convolution(lams, n_max):
    """Moments of sum lam_k (Z_k^2 - 1) by convolving single-term moment sequences.

    A single term has E[(lam (Z^2 - 1))^j] = lam^j sum_i C(j, i) (-1)^(j-i) (2i-1)!!.
    """
    from math import comb

    def single(lam):
        return [lam**j * sum(comb(j, i) * (-1) ** (j - i) * double_factorial(2 * i - 1) for i in range(j + 1))
                for j in range(n_max + 1)]

    out = [Fraction(1)] + [Fraction(0)] * n_max
    for lam in lams:
        s = single(lam)
        out = [sum(comb(n, j) * out[j] * s[n - j] for j in range(n + 1)) for n in range(n_max + 1)]
    return out


# -- cumulants and moments ----------------------------------------------------

def test_normal_product_law():
    elem = normal_product()
    k = cumulants(elem, 16)
    m = moments(elem, 16)
    for n in range(1, 9):
        assert k[2 * n] == factorial(2 * n - 1)
        assert k[2 * n - 1] == 0
        assert m[2 * n] == double_factorial(2 * n - 1) ** 2
    assert m[:9] == [1, 0, 1, 0, 9, 0, 225, 0, 11025]


@given(lambda_vectors)
def test_moments_match_convolution_oracle(lams):
    elem = SpectralElement.from_lambdas(lams)
    assert moments(elem, 8) == moments_by_convolution(lams, 8)


@given(lambda_vectors)
def test_cumulant_moment_round_trip(lams):
    k = cumulants(SpectralElement.from_lambdas(lams), 10)
    assert cumulants_from_moments(moments_from_cumulants(k)) == k


@given(lambda_vectors, st.fractions(min_value=Fraction(1, 5), max_value=5, max_denominator=5))
def test_cumulant_scaling(lams, c):
    elem = SpectralElement.from_lambdas(lams)
    k, kc = cumulants(elem, 8), cumulants(elem.scaled(c), 8)
    assert all(kc[r] == c**r * k[r] for r in range(9))


def test_gaussian_moments():
    assert gaussian_moments(8) == [1, 0, 1, 0, 3, 0, 15, 0, 105]


def test_power_sums_only_element():
    elem = SpectralElement.from_power_sums([0, Fraction(1, 2), 0, Fraction(1, 8)])
    assert cumulants(elem, 4)[4] == 6
    with pytest.raises(InsufficientOrderError):
        cumulants(elem, 6)


# -- expectations -------------------------------------------------------------

def test_expectations_of_family_vanish():
    elem = normal_product()
    assert all(expect_poly(elem, stein_poly(n)) == 0 for n in range(1, 16))
    assert expect_poly(elem, stein_poly(0)) == 1


def test_p2_p4_product_expectation():
    # E[(x^2 - 1)(x^4 - 14x^2 + 5)] = m6 - 15 m4 + 19 m2 - 5 = 225 - 135 + 19 - 5
    elem = normal_product()
    value = expect_poly(elem, stein_poly(2) * stein_poly(4))
    assert value == 104
    assert abs(expect_numeric(stein_poly(2) * stein_poly(4)) - 104) < 1e-8


def test_weak_orthogonality():
    elem = normal_product()
    for n in range(13):
        for m in range(13):
            if (n + m) % 2:
                assert expect_poly(elem, stein_poly(n) * stein_poly(m)) == 0


def test_derivative_expectation_identity():
    elem = normal_product()
    for n in range(1, 13):
        lhs = expect_poly(elem, X * stein_poly(n + 1))
        assert lhs == 2 * expect_poly(elem, X * stein_poly(n).derivative())
        if n % 2:
            assert lhs == 0
    # at n = 0 the identity picks up E[P_0] = 1
    assert expect_poly(elem, X * stein_poly(1)) == 1


def test_turan():
    rows = turan_check(20)
    assert (rows[0].lhs, rows[0].rhs) == (1, 0)
    assert (rows[1].lhs, rows[1].rhs) == (8, 4)
    assert all(r.holds and r.strict for r in rows)


# -- the degree-six diagnostic ------------------------------------------------

def test_f8_values():
    elem = f8_element()
    r3 = QuadRational(0, 1, 3)
    k = cumulants(elem, 6)
    assert k[2] == 1 and k[3] == -2 * r3 / 3 and k[4] == 6 and k[6] == Fraction(440, 3)
    assert expect_poly(elem, stein_poly(4)) == 0
    assert expect_poly(elem, stein_poly(8)) == 0
    rep = p6_diagnostic(elem)
    assert rep.expect_p6 == 40 and rep.delta_prime == Fraction(2, 9)
    assert rep.identity_residual == 0
    assert rep.even_moment_gaps == {2: 6, 3: 250}
    assert abs(rep.bound - 40**0.5) < 1e-12


def test_normal_product_diagnostic_is_zero():
    rep = p6_diagnostic(normal_product())
    assert rep.kappa3 == 0 and rep.delta_prime == 0 and rep.expect_p6 == 0


@given(lambda_vectors)
def test_p6_identity_and_positivity(lams):
    rep = p6_diagnostic(SpectralElement.from_lambdas(lams), normalize=True)
    assert rep.identity_residual == 0
    assert rep.expect_p6 >= 0


@given(lambda_vectors, st.fractions(min_value=Fraction(1, 4), max_value=4, max_denominator=4))
def test_diagnostic_scale_invariant(lams, c):
    a = p6_diagnostic(SpectralElement.from_lambdas(lams), normalize=True)
    b = p6_diagnostic(SpectralElement.from_lambdas([c * l for l in lams]), normalize=True)
    assert a.expect_p6 == b.expect_p6 and a.delta_prime == b.delta_prime


def test_diagnostic_requires_normalization():
    with pytest.raises(ValueError):
        p6_diagnostic(SpectralElement.from_lambdas([1, 1]))
    with pytest.raises(ValueError):
        p6_diagnostic(SpectralElement.from_lambdas([]))


def test_irrational_variance_needs_float_mode():
    elem = SpectralElement.from_lambdas([QuadRational(1, 1, 3)])
    with pytest.raises(FieldMismatchError):
        elem.normalized()
    rep = p6_diagnostic(elem.to_float_mode(), normalize=True)
    assert abs(float(rep.identity_residual)) < 1e-12


def test_float_mode_matches_exact():
    exact = p6_diagnostic(f8_element())
    approx = p6_diagnostic(f8_element().to_float_mode())
    assert abs(float(approx.expect_p6) - 40) < 1e-12
    assert FLOAT_CTX.prec >= 80
    assert abs(float(approx.delta_prime) - float(exact.delta_prime)) < 1e-12


def test_element_json_round_trip():
    for elem in (normal_product(), f8_element(), SpectralElement.from_power_sums([0, Fraction(1, 2)])):
        again = SpectralElement.from_json(elem.to_json())
        assert again.to_json() == elem.to_json()
    floaty = SpectralElement.from_json({"lambdas": ["0.5", "-0.5"]})
    assert floaty.float_mode


def test_report_json():
    js = p6_diagnostic(f8_element()).to_json()
    assert js["expect_p6_float"] == 40.0
    assert "unspecified constant" in js["bound_label"]


def test_even_moment_diagnostic():
    g = even_moment_diagnostic(moments(normal_product(), 4), 2)
    assert g.gap == 6
    assert even_moment_diagnostic(gaussian_moments(8), 3).gap == 0
    m = moments(f8_element(), 4)
    assert even_moment_diagnostic(m, 2).expect_w == m[4] - 3
    assert sum(c * m[k] for k, c in enumerate(w_poly(2).coeffs)) == m[4] - 3


# -- mixture polynomials ------------------------------------------------------

def test_q4():
    assert mixture_q_poly(4) == Poly([0, -4032, 19152, -30240, 15120])


@pytest.mark.parametrize("n", range(4, 11))
def test_q_structure(n):
    q = mixture_q_poly(n)
    deg = n if n % 2 == 0 else n - 1
    assert q.degree == deg
    assert q(Fraction(0)) == 0 and q(Fraction(1)) == 0
    for k in range(1, deg + 1):
        expected = (-1) ** k if n % 2 == 0 else (-1) ** (k - 1)
        assert q[k] * expected > 0
    assert sign_changes(list(q.coeffs)) == deg - 1


def test_q3_is_nonnegative_on_unit_interval():
    q = mixture_q_poly(3)
    assert sturm_count(q, 0, 1) == 0
    assert q(Fraction(1, 2)) > 0


def test_mixture_element_matches_q():
    t = Fraction(1, 4)
    elem = mixture_element(t)
    assert expect_poly(elem, stein_poly(8)) == mixture_q_poly(4)(t)
    assert mixture_element(Fraction(1, 3)).float_mode


# -- Stein operator synthesis -------------------------------------------------

def test_stein_normal_product():
    synth = stein_coefficients([Fraction(1, 2), Fraction(-1, 2)])
    assert synth.a == (Fraction(-1, 4), 0, Fraction(1, 4))
    assert synth.b == (0, Fraction(1, 4))
    assert synth.assembled.ratio_to(make_stein_op_d2()) == Fraction(-1, 4)
    assert synth.normalized == make_stein_op_d2()
    assert all(r == 0 for r in stein_residuals(synth, normal_product(), 10))


def test_stein_centered_chi_square():
    synth = stein_coefficients([1])
    f = Poly([1, 2, 3])
    assert synth.assembled(f) == Poly([1, 1]) * f.derivative() - (X * f).scale(Fraction(1, 2))


@given(st.lists(nonzero, min_size=1, max_size=4))
def test_stein_annihilates(lams):
    synth = stein_coefficients(lams)
    assert all(r == 0 for r in stein_residuals(synth, SpectralElement.from_lambdas(lams), 10))


def test_stein_rejects_zero():
    with pytest.raises(ValueError):
        stein_coefficients([1, 0])


# -- basis decomposition ------------------------------------------------------

def test_decomposition():
    fam = stein_family(8)
    assert decompose_in_family(Poly.monomial(8) - 11025, fam) == [0, 0, 24940, 0, 4214, 0, 140, 0, 1]
    assert decompose_in_family(stein_poly(6), fam) == [0, 0, 0, 0, 0, 0, 1]
    assert decompose_in_family(Poly.monomial(2), fam) == [1, 0, 1]
