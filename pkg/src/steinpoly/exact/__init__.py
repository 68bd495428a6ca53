"""Exact arithmetic: rationals, Q(sqrt(s)), polynomials, series, operators."""

from fractions import Fraction as Rational

from .codec import decode_number, decode_poly, encode_number, encode_poly
from .diffop import DiffOp, diffop_apply, diffop_compose_symbolic_check
from .poly import Poly, gcd, poly_arith, squarefree
from .quadratic import FieldMismatchError, QuadRational, exact_sign, squarefree_part
from .series import (
    PowerSeries,
    arctanh_series,
    cosh_series,
    inv_sqrt_one_minus_sq,
    series_arith,
    sinh_series,
    tanh_series,
)

__all__ = [
    "Rational",
    "QuadRational",
    "FieldMismatchError",
    "Poly",
    "PowerSeries",
    "DiffOp",
    "poly_arith",
    "series_arith",
    "diffop_apply",
    "diffop_compose_symbolic_check",
    "gcd",
    "squarefree",
    "squarefree_part",
    "exact_sign",
    "cosh_series",
    "sinh_series",
    "tanh_series",
    "arctanh_series",
    "inv_sqrt_one_minus_sq",
    "encode_number",
    "decode_number",
    "encode_poly",
    "decode_poly",
]
