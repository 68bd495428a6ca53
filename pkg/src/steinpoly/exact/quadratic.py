"""Numbers in a real quadratic field Q(sqrt(s))."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC

Rational = Fraction


class FieldMismatchError(ValueError):
    """Raised when two quadratic numbers carry different field tags."""


def squarefree_part(n: int) -> tuple[int, int]:
    """Return ``(f, s)`` with ``n == f**2 * s`` and ``s`` square-free (n > 0)."""
    if n <= 0:
        raise ValueError("squarefree_part needs a positive integer")
    from sympy import factorint

    f, s = 1, 1
    for prime, e in factorint(n).items():
        f *= prime ** (e // 2)
        if e % 2:
            s *= prime
    return f, s


def _is_squarefree(s: int) -> bool:
    return s >= 2 and squarefree_part(s)[1] == s


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


class QuadRational:
    """Exact number ``a + b*sqrt(s)`` with rational ``a``, ``b``.

    Instances are immutable.  Plain ints and Fractions are promoted into the
    field of the other operand; two quadratic numbers with different ``s``
    cannot be combined.
    """

    __slots__ = ("a", "b", "s")

    def __init__(self, a=0, b=0, s: int = 3):
        if not _is_squarefree(s):
            raise ValueError(f"field tag s={s} must be a square-free integer >= 2")
        object.__setattr__(self, "a", _as_fraction(a))
        object.__setattr__(self, "b", _as_fraction(b))
        object.__setattr__(self, "s", s)

    def __setattr__(self, name, value):
        raise AttributeError("QuadRational is immutable")

    @classmethod
    def sqrt_of(cls, q, s: int | None = None) -> "QuadRational | Fraction":
        """Exact square root of a nonnegative rational.

        Returns a Fraction when ``q`` is a perfect square, otherwise a
        QuadRational in ``Q(sqrt(s'))`` where ``s'`` is the square-free part
        of ``num*den``.  If ``s`` is given and differs from ``s'`` a
        FieldMismatchError is raised.
        """
        q = _as_fraction(q)
        if q < 0:
            raise ValueError("square root of a negative rational")
        if q == 0:
            return Fraction(0)
        f, sf = squarefree_part(q.numerator * q.denominator)
        coef = Fraction(f, q.denominator)
        if sf == 1:
            return coef
        if s is not None and s != sf:
            raise FieldMismatchError(f"sqrt({q}) lies in Q(sqrt({sf})), not Q(sqrt({s}))")
        return cls(0, coef, sf)

    # -- coercion ---------------------------------------------------------
    def _align(self, other):
        """Both operands in one field, or None for foreign types.

        A rational value tagged with another field is re-tagged, so
        ``Q(sqrt s)`` and ``Q(sqrt t)`` mix as long as one side is rational.
        """
        if isinstance(other, QuadRational):
            if other.s == self.s:
                return self, other
            if other.b == 0:
                return self, QuadRational(other.a, 0, self.s)
            if self.b == 0:
                return QuadRational(self.a, 0, other.s), other
            raise FieldMismatchError(f"cannot mix Q(sqrt({self.s})) and Q(sqrt({other.s}))")
        if isinstance(other, (int, Fraction)):
            return self, QuadRational(other, 0, self.s)
        return None

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        pair = self._align(other)
        if pair is None:
            return NotImplemented
        x, o = pair
        return QuadRational(x.a + o.a, x.b + o.b, x.s)

    __radd__ = __add__

    def __neg__(self):
        return QuadRational(-self.a, -self.b, self.s)

    def __pos__(self):
        return self

    def __sub__(self, other):
        pair = self._align(other)
        if pair is None:
            return NotImplemented
        x, o = pair
        return QuadRational(x.a - o.a, x.b - o.b, x.s)

    def __rsub__(self, other):
        pair = self._align(other)
        if pair is None:
            return NotImplemented
        x, o = pair
        return o - x

    def __mul__(self, other):
        pair = self._align(other)
        if pair is None:
            return NotImplemented
        x, o = pair
        return QuadRational(x.a * o.a + x.s * x.b * o.b, x.a * o.b + x.b * o.a, x.s)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadRational":
        return QuadRational(self.a, -self.b, self.s)

    def norm(self) -> Fraction:
        return self.a * self.a - self.s * self.b * self.b

    def inverse(self) -> "QuadRational":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("QuadRational division by zero")
        return QuadRational(self.a / n, -self.b / n, self.s)

    def __truediv__(self, other):
        pair = self._align(other)
        if pair is None:
            return NotImplemented
        x, o = pair
        return x * o.inverse()

    def __rtruediv__(self, other):
        pair = self._align(other)
        if pair is None:
            return NotImplemented
        x, o = pair
        return o * x.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = QuadRational(1, 0, self.s)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison -------------------------------------------------------
    def sign(self) -> int:
        """Exact sign of ``a + b*sqrt(s)``."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with s*b^2
        diff = self.a * self.a - self.s * self.b * self.b
        return sa if diff > 0 else (sb if diff < 0 else 0)

    def __eq__(self, other):
        if isinstance(other, QuadRational):
            if other.s != self.s:
                return self.b == 0 and other.b == 0 and self.a == other.a
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.s))

    def _cmp(self, other) -> int:
        pair = self._align(other)
        if pair is None:
            raise TypeError("unorderable types")
        x, o = pair
        return (x - o).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __bool__(self):
        return self.a != 0 or self.b != 0

    # -- conversion -------------------------------------------------------
    def is_rational(self) -> bool:
        return self.b == 0

    def rational(self) -> Fraction:
        if self.b != 0:
            raise ValueError(f"{self} is irrational")
        return self.a

    def __float__(self):
        import math

        return float(self.a) + float(self.b) * math.sqrt(self.s)

    def to_mpf(self):
        import mpmath

        a = mpmath.mpf(self.a.numerator) / self.a.denominator
        b = mpmath.mpf(self.b.numerator) / self.b.denominator
        return a + b * mpmath.sqrt(self.s)

    def __repr__(self):
        return f"QuadRational({self.a}, {self.b}, s={self.s})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*sqrt({self.s})"
        sign = "+" if self.b > 0 else "-"
        return f"{self.a} {sign} {abs(self.b)}*sqrt({self.s})"


def exact_sign(x) -> int:
    """Sign of an int, Fraction or QuadRational."""
    if isinstance(x, QuadRational):
        return x.sign()
    return (x > 0) - (x < 0)
