"""Truncated formal power series with tracked validity order."""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Callable, Iterable


class PowerSeries:
    """Series ``sum(coeffs[k] * t**k)`` known exactly for ``k <= order``.

    Coefficients may be any exact ring element supporting ``+``, ``*`` and
    division by integers (Fractions, QuadRationals, or Polys in another
    variable).  Binary operations return a series of order
    ``min(self.order, other.order)``.
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Iterable, order: int | None = None):
        cs = list(coeffs)
        if order is None:
            order = len(cs) - 1
        if order < 0:
            raise ValueError("series order must be >= 0")
        cs = cs[: order + 1]
        cs += [Fraction(0)] * (order + 1 - len(cs))
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "order", order)

    def __setattr__(self, name, value):
        raise AttributeError("PowerSeries is immutable")

    @classmethod
    def from_function(cls, coeff: Callable[[int], object], order: int) -> "PowerSeries":
        return cls([coeff(k) for k in range(order + 1)], order)

    @classmethod
    def one(cls, order: int) -> "PowerSeries":
        return cls([Fraction(1)], order)

    @classmethod
    def identity(cls, order: int) -> "PowerSeries":
        """The series ``t``."""
        return cls([Fraction(0), Fraction(1)], order)

    def __getitem__(self, k: int):
        return self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)

    def egf(self) -> list:
        """Coefficients times ``k!``, i.e. the exponential-generating view."""
        return [factorial(k) * c for k, c in enumerate(self.coeffs)]

    def truncate(self, order: int) -> "PowerSeries":
        if order > self.order:
            raise ValueError(f"cannot extend a series known to order {self.order} to {order}")
        return PowerSeries(self.coeffs[: order + 1], order)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        n = min(self.order, other.order)
        return PowerSeries([self.coeffs[k] + other.coeffs[k] for k in range(n + 1)], n)

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        n = min(self.order, other.order)
        return PowerSeries([self.coeffs[k] - other.coeffs[k] for k in range(n + 1)], n)

    def __neg__(self):
        return PowerSeries([-c for c in self.coeffs], self.order)

    def scale(self, c) -> "PowerSeries":
        """Multiply every coefficient by ``c`` (which may itself be a Poly)."""
        return PowerSeries([c * a for a in self.coeffs], self.order)

    def __mul__(self, other: "PowerSeries") -> "PowerSeries":
        if not isinstance(other, PowerSeries):
            return self.scale(other)
        n = min(self.order, other.order)
        out = []
        for k in range(n + 1):
            acc = Fraction(0)
            for i in range(k + 1):
                acc = self.coeffs[i] * other.coeffs[k - i] + acc
            out.append(acc)
        return PowerSeries(out, n)

    def __rmul__(self, c):
        return self.scale(c)

    def __truediv__(self, other: "PowerSeries") -> "PowerSeries":
        if not isinstance(other, PowerSeries):
            return PowerSeries([a / other for a in self.coeffs], self.order)
        b0 = other.coeffs[0]
        if b0 == 0:
            raise ZeroDivisionError("series division needs a nonzero constant term")
        n = min(self.order, other.order)
        q: list = []
        for k in range(n + 1):
            acc = self.coeffs[k]
            for i in range(1, k + 1):
                acc = acc - other.coeffs[i] * q[k - i]
            q.append(acc / b0)
        return PowerSeries(q, n)

    def compose(self, inner: "PowerSeries") -> "PowerSeries":
        """Return ``self(inner(t))``; ``inner`` must have zero constant term."""
        if inner.coeffs[0] != 0:
            raise ValueError("composition needs an inner series with zero constant term")
        n = min(self.order, inner.order)
        acc = PowerSeries([self.coeffs[n]], n)
        for k in range(n - 1, -1, -1):
            acc = acc * inner
            acc = PowerSeries([acc.coeffs[0] + self.coeffs[k], *acc.coeffs[1:]], n)
        return acc

    def exp(self) -> "PowerSeries":
        """``exp`` of a series with zero constant term (via e' = a'e)."""
        if self.coeffs[0] != 0:
            raise ValueError("exp needs a series with zero constant term")
        n = self.order
        e: list = [Fraction(1)]
        for k in range(1, n + 1):
            acc = Fraction(0)
            for j in range(1, k + 1):
                acc = j * self.coeffs[j] * e[k - j] + acc
            e.append(acc / k)
        return PowerSeries(e, n)

    def derivative(self) -> "PowerSeries":
        """Term-wise ``d/dt``; the result is valid to order ``order - 1``."""
        if self.order == 0:
            raise ValueError("derivative of an order-0 series carries no information")
        return PowerSeries([k * self.coeffs[k] for k in range(1, self.order + 1)], self.order - 1)

    def reversion(self) -> "PowerSeries":
        """Compositional inverse of a delta series (f(0) = 0, f'(0) != 0)."""
        if self.coeffs[0] != 0 or self.order < 1 or self.coeffs[1] == 0:
            raise ValueError("reversion needs a delta series")
        n = self.order
        f1 = self.coeffs[1]
        g = [Fraction(0), 1 / f1]
        for k in range(2, n + 1):
            trial = PowerSeries(g + [Fraction(0)], k)
            err = self.truncate(k).compose(trial).coeffs[k]
            g.append(-err / f1)
        return PowerSeries(g, n)

    def map(self, fn: Callable) -> "PowerSeries":
        return PowerSeries([fn(c) for c in self.coeffs], self.order)

    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __repr__(self):
        return f"PowerSeries({list(self.coeffs)!r}, order={self.order})"


def series_arith(a: PowerSeries, b: PowerSeries | None = None, op: str = "add") -> PowerSeries:
    """Dispatch a named series operation (``add, mul, divide, compose, exp``)."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "divide":
        return a / b
    if op == "compose":
        return a.compose(b)
    if op == "exp":
        return a.exp()
    raise ValueError(f"unknown series operation {op!r}")


# -- elementary series ------------------------------------------------------

def cosh_series(order: int) -> PowerSeries:
    return PowerSeries.from_function(lambda k: Fraction(1, factorial(k)) if k % 2 == 0 else Fraction(0), order)


def sinh_series(order: int) -> PowerSeries:
    return PowerSeries.from_function(lambda k: Fraction(1, factorial(k)) if k % 2 == 1 else Fraction(0), order)


def tanh_series(order: int) -> PowerSeries:
    return sinh_series(order) / cosh_series(order)


def arctanh_series(order: int) -> PowerSeries:
    """``sum t^(2k+1)/(2k+1)``."""
    return PowerSeries.from_function(lambda k: Fraction(1, k) if k % 2 == 1 else Fraction(0), order)


def inv_sqrt_one_minus_sq(order: int) -> PowerSeries:
    """``(1 - t^2)^(-1/2) = sum binom(2k, k) (t/2)^(2k)``."""
    from math import comb

    return PowerSeries.from_function(
        lambda k: Fraction(comb(k, k // 2), 2**k) if k % 2 == 0 else Fraction(0), order
    )

