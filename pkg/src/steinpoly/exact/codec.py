"""Canonical JSON encoding of exact numbers and polynomials."""

from __future__ import annotations

from fractions import Fraction

from .poly import Poly
from .quadratic import QuadRational


def encode_number(x):
    if isinstance(x, QuadRational):
        return {"a": _frac_str(x.a), "b": _frac_str(x.b), "s": x.s}
    if isinstance(x, (int, Fraction)):
        return _frac_str(Fraction(x))
    raise TypeError(f"cannot encode {type(x).__name__} exactly")


def _frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def decode_number(obj):
    if isinstance(obj, dict):
        return QuadRational(Fraction(obj["a"]), Fraction(obj.get("b", "0")), int(obj["s"]))
    if isinstance(obj, bool):
        raise TypeError("booleans are not numbers")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, str):
        return Fraction(obj.strip())
    raise TypeError(f"cannot decode {obj!r} as an exact number")


def encode_poly(p: Poly) -> dict:
    return {"coeffs": [encode_number(c) for c in p.coeffs]}


def decode_poly(obj) -> Poly:
    if isinstance(obj, list):
        return Poly(decode_number(c) for c in obj)
    return Poly(decode_number(c) for c in obj["coeffs"])
