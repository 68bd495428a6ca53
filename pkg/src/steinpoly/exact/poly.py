"""Dense univariate polynomials with exact coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .quadratic import QuadRational


def _exact(c):
    if isinstance(c, (Fraction, QuadRational)):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"non-exact polynomial coefficient {c!r}")


class Poly:
    """Polynomial ``sum(coeffs[k] * x**k)``.

    Coefficients are Fractions or QuadRationals, stored in ascending order
    with trailing zeros stripped; the zero polynomial has no coefficients and
    degree -1.  Instances are immutable and hashable.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_exact(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        return cls([0] * k + [c])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def const(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def from_roots(cls, roots: Sequence) -> "Poly":
        p = cls([1])
        for r in roots:
            p = p * cls([-r, 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k: int):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    @property
    def leading(self):
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    # -- ring operations --------------------------------------------------
    @staticmethod
    def _lift(other) -> "Poly | None":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction, QuadRational)):
            return Poly([other])
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly(self[k] + o[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly(self[k] - o[k] for k in range(n))

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QuadRational)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        return Poly(c * a for a in self.coeffs)

    def __truediv__(self, c):
        if isinstance(c, Poly):
            return NotImplemented
        if c == 0:
            raise ZeroDivisionError("polynomial scaled by 1/0")
        return Poly(a / c for a in self.coeffs)

    def __pow__(self, k: int) -> "Poly":
        result = Poly([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    # -- calculus ---------------------------------------------------------
    def derivative(self, order: int = 1) -> "Poly":
        cs = list(self.coeffs)
        for _ in range(order):
            cs = [k * cs[k] for k in range(1, len(cs))]
        return Poly(cs)

    def antiderivative(self) -> "Poly":
        """Return the antiderivative vanishing at 0."""
        return Poly([0] + [c / (k + 1) for k, c in enumerate(self.coeffs)])

    def __call__(self, x):
        """Evaluate by Horner's rule.

        Exact arguments give exact results; anything else (float, numpy
        array, mpmath number) is evaluated with coefficients converted to
        the argument's arithmetic.
        """
        if isinstance(x, (int, Fraction, QuadRational)):
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        convert = _mp_convert if type(x).__module__.startswith("mpmath") else float
        acc = 0.0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + convert(c)
        return acc

    def compose(self, q: "Poly") -> "Poly":
        """Return ``self(q(x))``."""
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * q + c
        return acc

    def divmod(self, d: "Poly") -> tuple["Poly", "Poly"]:
        """Euclidean division over the coefficient field."""
        if d.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quot = [Fraction(0)] * max(len(rem) - len(d.coeffs) + 1, 0)
        lead = d.leading
        dd = d.degree
        for k in range(len(rem) - 1, dd - 1, -1):
            c = rem[k]
            if c == 0:
                continue
            q = c / lead
            quot[k - dd] = q
            for j, dc in enumerate(d.coeffs):
                rem[k - dd + j] = rem[k - dd + j] - q * dc
        return Poly(quot), Poly(rem)

    def __mod__(self, d: "Poly") -> "Poly":
        return self.divmod(d)[1]

    def __floordiv__(self, d: "Poly") -> "Poly":
        return self.divmod(d)[0]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self / self.leading

    def to_float_coeffs(self) -> list[float]:
        return [float(c) for c in self.coeffs]

    def is_even(self) -> bool:
        return all(c == 0 for c in self.coeffs[1::2])

    def is_odd(self) -> bool:
        return all(c == 0 for c in self.coeffs[0::2])

    # -- display ----------------------------------------------------------
    def __repr__(self):
        return f"Poly([{', '.join(str(c) for c in self.coeffs)}])"

    def pretty(self, var: str = "x") -> str:
        """Human-readable form, highest power first, e.g. ``x^2 - 1``."""
        if not self.coeffs:
            return "0"
        parts: list[str] = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            if isinstance(c, QuadRational) and c.b != 0:
                body = f"({c})"
                neg = False
            else:
                neg = c < 0
                mag = -c if neg else c
                body = "" if (mag == 1 and k > 0) else str(mag)
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            term = body + mono
            if not parts:
                parts.append(("-" if neg else "") + term)
            else:
                parts.append(("- " if neg else "+ ") + term)
        return " ".join(parts)

    __str__ = pretty


def _mp_convert(c):
    import mpmath

    if isinstance(c, QuadRational):
        return c.to_mpf()
    return mpmath.mpf(c.numerator) / c.denominator


def gcd(p: Poly, q: Poly) -> Poly:
    """Monic greatest common divisor (zero if both are zero)."""
    a, b = p, q
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree(p: Poly) -> Poly:
    """Square-free part ``p / gcd(p, p')``, made monic."""
    if p.degree <= 0:
        return p.monic()
    g = gcd(p, p.derivative())
    return (p // g).monic()


def poly_arith(p: Poly, q=None, op: str = "add", point=None):
    """Dispatch a named polynomial operation.

    ``op`` is one of ``add, sub, mul, scale, derivative,
    antiderivative_from_0, eval_at, compose``; ``q`` is the second operand
    (a scalar for ``scale``) and ``point`` the evaluation point.
    """
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    if op == "scale":
        return p.scale(q)
    if op == "derivative":
        return p.derivative()
    if op == "antiderivative_from_0":
        return p.antiderivative()
    if op == "eval_at":
        return p(point)
    if op == "compose":
        return p.compose(q)
    raise ValueError(f"unknown polynomial operation {op!r}")
