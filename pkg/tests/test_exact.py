from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from steinpoly.exact import (
    DiffOp,
    FieldMismatchError,
    Poly,
    PowerSeries,
    QuadRational,
    cosh_series,
    decode_number,
    decode_poly,
    diffop_apply,
    diffop_compose_symbolic_check,
    encode_number,
    encode_poly,
    gcd,
    poly_arith,
    squarefree,
    squarefree_part,
    tanh_series,
)
from steinpoly.exact.series import arctanh_series, sinh_series
from steinpoly.family import make_mb_op, make_ou_op, make_stein_op_d2

small = st.fractions(min_value=-20, max_value=20, max_denominator=12)
quad3 = st.builds(lambda a, b: QuadRational(a, b, 3), small, small)
polys = st.lists(st.integers(-9, 9), max_size=11).map(Poly)


def naive_mul(p: Poly, q: Poly) -> Poly:
    out = [Fraction(0)] * (len(p.coeffs) + len(q.coeffs))
    for i, a in enumerate(p.coeffs):
        for j, b in enumerate(q.coeffs):
            out[i + j] += a * b
    return Poly(out)


# -- QuadRational -------------------------------------------------------------

def test_squarefree_part():
    assert squarefree_part(12) == (2, 3)
    assert squarefree_part(49) == (7, 1)
    assert squarefree_part(30) == (1, 30)


def test_quad_basic_arithmetic():
    r3 = QuadRational(0, 1, 3)
    assert r3 * r3 == 3
    assert (1 + r3) * (1 - r3) == -2
    assert (1 / r3) == QuadRational(0, Fraction(1, 3), 3)
    assert r3 ** 4 == 9


@given(quad3, quad3)
def test_quad_field_inverse(a, b):
    assume(b != 0)
    assert (a * b) / b == a
    assert (a * b) * b.inverse() == a


@given(quad3, quad3, quad3)
def test_quad_ring_laws(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)


@given(quad3)
def test_quad_sign_matches_float(a):
    f = float(a)
    assume(abs(f) > 1e-9)
    assert a.sign() == (1 if f > 0 else -1)
    assert (a > 0) == (f > 0)


def test_quad_sign_exact_zero_and_near_cancel():
    # 1351/780 is a convergent of sqrt(3); the difference is about 5e-7
    x = QuadRational(Fraction(1351, 780), -1, 3)
    assert x.sign() == 1
    assert QuadRational(0, 0, 3).sign() == 0


def test_quad_field_mismatch():
    with pytest.raises(FieldMismatchError):
        QuadRational(0, 1, 3) + QuadRational(0, 1, 5)


def test_quad_rational_values_mix_across_fields():
    a = QuadRational(2, 0, 7)
    b = QuadRational(0, 1, 3)
    assert a + b == QuadRational(2, 1, 3)
    assert a < b + 1
    assert QuadRational(5, 0, 3) == QuadRational(5, 0, 11) == Fraction(5)


def test_quad_from_rational_has_zero_radical_part():
    q = QuadRational(Fraction(3, 4))
    assert q.b == 0 and q.is_rational() and q.rational() == Fraction(3, 4)


def test_quad_rejects_non_squarefree_tag():
    with pytest.raises(ValueError):
        QuadRational(1, 1, 4)


def test_sqrt_of():
    assert QuadRational.sqrt_of(Fraction(9, 4)) == Fraction(3, 2)
    r = QuadRational.sqrt_of(Fraction(1, 3))
    assert r * r == Fraction(1, 3) and r.s == 3
    with pytest.raises(FieldMismatchError):
        QuadRational.sqrt_of(2, s=3)


# -- Poly ---------------------------------------------------------------------

def test_poly_examples():
    assert Poly([-1, 0, 1]) * Poly([0, -5, 0, 1]) == Poly([0, 5, 0, -6, 0, 1])
    assert Poly([5, 0, -14, 0, 1]).derivative() == Poly([0, -28, 0, 4])
    assert Poly([-1, 0, 1]).antiderivative() == Poly([0, -1, 0, Fraction(1, 3)])
    assert Poly([5, 0, -14, 0, 1]).pretty() == "x^4 - 14x^2 + 5"
    assert Poly().pretty() == "0"
    assert Poly([0, 0, 0]).degree == -1


def test_poly_trailing_zeros_stripped():
    p = Poly([1, 2, 0, 0])
    assert p.coeffs == (1, 2) and p.degree == 1


@given(polys, polys)
def test_poly_mul_matches_convolution(p, q):
    assert p * q == naive_mul(p, q)


@given(polys, polys)
def test_poly_leibniz(p, q):
    assert (p * q).derivative() == p.derivative() * q + p * q.derivative()


@given(polys, polys)
def test_poly_divmod(p, q):
    assume(not q.is_zero())
    quo, rem = p.divmod(q)
    assert quo * q + rem == p
    assert rem.degree < q.degree


@given(polys, st.fractions(min_value=-5, max_value=5, max_denominator=7))
def test_poly_eval_matches_naive(p, x):
    assert p(x) == sum((c * x**k for k, c in enumerate(p.coeffs)), Fraction(0))


@given(polys, polys, st.integers(-4, 4))
def test_poly_compose(p, q, x):
    assert p.compose(q)(Fraction(x)) == p(q(Fraction(x)))


def test_poly_gcd_and_squarefree():
    p = Poly.from_roots([1, 1, 2, Fraction(1, 3)])
    assert gcd(p, p.derivative()).monic() == Poly([-1, 1])
    assert squarefree(p).monic() == Poly.from_roots([1, 2, Fraction(1, 3)]).monic()


def test_poly_scalar_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        Poly([1, 2]) / 0


def test_poly_eval_float_and_quadratic():
    p = Poly([-3, 0, 1])
    assert p(2.0) == 1.0
    assert p(QuadRational(0, 1, 3)) == 0


def test_poly_arith_dispatch():
    p, q = Poly([1, 1]), Poly([0, 1])
    assert poly_arith(p, q, "mul") == Poly([0, 1, 1])
    assert poly_arith(p, op="eval_at", point=Fraction(2)) == 3
    assert poly_arith(Poly([-1, 0, 1]), op="antiderivative_from_0") == Poly([0, -1, 0, Fraction(1, 3)])


# -- PowerSeries --------------------------------------------------------------

def test_sech_series_low_order():
    sech = PowerSeries.one(4) / cosh_series(4)
    assert [sech[k] for k in range(5)] == [1, 0, Fraction(-1, 2), 0, Fraction(5, 24)]


def test_exp_of_zero_is_one():
    assert PowerSeries([0], 6).exp() == PowerSeries.one(6)


def test_compose_with_identity():
    t = tanh_series(9)
    assert t.compose(PowerSeries.identity(9)) == t


def test_tanh_arctanh_inverse():
    assert tanh_series(11).compose(arctanh_series(11)) == PowerSeries.identity(11)
    assert arctanh_series(11).reversion() == tanh_series(11)


def test_sinh_over_cosh_is_tanh():
    assert sinh_series(10) / cosh_series(10) == tanh_series(10)


def test_series_order_tracking():
    a = PowerSeries([1, 2, 3], 5)
    b = PowerSeries([1, 1], 3)
    assert (a * b).order == 3 and (a + b).order == 3
    assert a.derivative().order == 4


series_coeffs = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=5), min_size=7, max_size=7)


@given(series_coeffs, series_coeffs)
def test_series_divide_round_trip(a, b):
    assume(b[0] != 0)
    A, B = PowerSeries(a, 6), PowerSeries(b, 6)
    assert (A * B) / B == A


@given(series_coeffs, series_coeffs)
def test_series_exp_is_homomorphism(a, b):
    A, B = PowerSeries([0] + a[1:], 6), PowerSeries([0] + b[1:], 6)
    assert (A + B).exp() == A.exp() * B.exp()


def test_series_errors():
    with pytest.raises(ZeroDivisionError):
        PowerSeries.one(3) / PowerSeries([0, 1], 3)
    with pytest.raises(ValueError):
        tanh_series(4).compose(PowerSeries([1, 1], 4))
    with pytest.raises(ValueError):
        PowerSeries([1, 1], 4).exp()


# -- DiffOp -------------------------------------------------------------------

X = Poly.x()


def test_operator_examples():
    R = make_stein_op_d2()
    L = make_ou_op()
    assert R(Poly.monomial(2)) == Poly([0, -4, 0, 1])
    assert R(Poly.const(1)) == X
    assert R(X) == Poly([-1, 0, 1])
    assert L(Poly.const(1)) == X
    assert L(Poly([-1, 0, 1])) == Poly([0, -3, 0, 1])
    assert make_mb_op(0)(Poly.const(1)) == Poly([0, 0, -1])


def test_operator_identity_with_bessel_operator():
    R = make_stein_op_d2()
    lhs = DiffOp.multiplication(-X) @ R
    mb = DiffOp({2: X * X, 1: X, 0: -(X * X)})
    assert diffop_compose_symbolic_check(lhs, mb, 12)
    assert mb == make_mb_op(0)
    # the variant with x f in place of x f' is not an identity
    printed = DiffOp({2: X * X, 0: X - X * X})
    assert not diffop_compose_symbolic_check(lhs, printed, 12)


def test_operator_check_reflexive_and_distinguishing():
    R = make_stein_op_d2()
    assert diffop_compose_symbolic_check(R, R, 5)
    assert not diffop_compose_symbolic_check(R, make_ou_op(), 2)


@given(polys, polys, st.integers(-5, 5), st.integers(-5, 5))
def test_diffop_linear(p, q, a, b):
    R = make_stein_op_d2()
    assert diffop_apply(R, p.scale(a) + q.scale(b)) == R(p).scale(a) + R(q).scale(b)


@given(polys)
def test_composition_matches_sequential_application(p):
    R, L = make_stein_op_d2(), make_ou_op()
    assert (R @ L)(p) == R(L(p))


def test_ratio_to():
    R = make_stein_op_d2()
    assert R.scale(Fraction(-1, 4)).ratio_to(R) == Fraction(-1, 4)
    assert make_ou_op().ratio_to(R) is None


# -- codec --------------------------------------------------------------------

@given(quad3)
def test_codec_round_trip_numbers(a):
    assert decode_number(encode_number(a)) == a
    assert decode_number(encode_number(a.a)) == a.a


@given(polys)
def test_codec_round_trip_polys(p):
    assert decode_poly(encode_poly(p)) == p


def test_codec_formats():
    assert encode_number(Fraction(-3, 4)) == "-3/4"
    assert encode_poly(Poly([-1, 0, 1])) == {"coeffs": ["-1/1", "0/1", "1/1"]}
    with pytest.raises(TypeError):
        decode_number(True)
