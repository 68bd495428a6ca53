"""Linear differential operators with polynomial coefficients."""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable, Mapping

from .poly import Poly


class DiffOp:
    """Operator ``f -> sum_j c_j(x) * f^(j)(x)``.

    ``terms`` maps each derivative order ``j`` to its nonzero coefficient
    polynomial ``c_j``.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, Poly] | Iterable[tuple[int, Poly]]):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, Poly] = {}
        for j, c in items:
            if j < 0:
                raise ValueError("derivative order must be >= 0")
            c = c if isinstance(c, Poly) else Poly([c])
            acc[j] = acc.get(j, Poly()) + c
        object.__setattr__(self, "terms", {j: c for j, c in sorted(acc.items()) if not c.is_zero()})

    def __setattr__(self, name, value):
        raise AttributeError("DiffOp is immutable")

    @classmethod
    def multiplication(cls, p: Poly) -> "DiffOp":
        """The zeroth-order operator ``f -> p*f``."""
        return cls({0: p})

    @property
    def order(self) -> int:
        return max(self.terms, default=-1)

    def apply(self, p: Poly) -> Poly:
        out = Poly()
        for j, c in self.terms.items():
            dp = p.derivative(j)
            if not dp.is_zero():
                out = out + c * dp
        return out

    __call__ = apply

    def __add__(self, other: "DiffOp") -> "DiffOp":
        return DiffOp(list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other: "DiffOp") -> "DiffOp":
        return self + (-other)

    def scale(self, c) -> "DiffOp":
        return DiffOp({j: p.scale(c) for j, p in self.terms.items()})

    def left_multiply(self, p: Poly) -> "DiffOp":
        """The operator ``f -> p * (self f)``."""
        return DiffOp({j: p * c for j, c in self.terms.items()})

    def __matmul__(self, other: "DiffOp") -> "DiffOp":
        """Composition ``self o other`` by the Leibniz rule."""
        out: list[tuple[int, Poly]] = []
        for i, a in self.terms.items():
            for j, b in other.terms.items():
                for l in range(i + 1):
                    db = b.derivative(i - l)
                    if not db.is_zero():
                        out.append((l + j, (a * db).scale(comb(i, l))))
        return DiffOp(out)

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def ratio_to(self, other: "DiffOp"):
        """Scalar ``c`` with ``self == c * other``, or None if not proportional."""
        if set(self.terms) != set(other.terms) or not self.terms:
            return None
        j0 = next(iter(self.terms))
        p, q = self.terms[j0], other.terms[j0]
        c = p.leading / q.leading
        return c if self == other.scale(c) else None

    def __repr__(self):
        body = " + ".join(f"({c.pretty()})*D^{j}" for j, c in self.terms.items())
        return f"DiffOp({body or '0'})"


def diffop_apply(op: DiffOp, p: Poly) -> Poly:
    return op.apply(p)


def diffop_compose_symbolic_check(lhs: DiffOp, rhs: DiffOp, deg: int) -> bool:
    """True iff ``lhs`` and ``rhs`` agree on every monomial ``x^k``, ``k <= deg``."""
    if deg < 0:
        raise ValueError("deg must be >= 0")
    return all(lhs.apply(Poly.monomial(k)) == rhs.apply(Poly.monomial(k)) for k in range(deg + 1))


ONE = Poly([Fraction(1)])
X = Poly.x()
