"""Exact real-root counting and isolation for rational polynomials."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import Poly, exact_sign, squarefree

DEFAULT_WIDTH = Fraction(1, 2**16)


@dataclass(frozen=True)
class SturmChain:
    source: Poly
    chain: tuple[Poly, ...]

    def variations(self, x) -> int:
        return sign_changes([p(x) for p in self.chain])


@dataclass(frozen=True)
class IsolatingInterval:
    lo: Fraction
    hi: Fraction

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


def sturm_chain(p: Poly) -> SturmChain:
    """Chain of the square-free part: ``q, q', -rem(q, q'), ...``."""
    if p.is_zero():
        raise ValueError("Sturm chain of the zero polynomial")
    q = squarefree(p)
    chain = [q, q.derivative()]
    while not chain[-1].is_zero():
        chain.append(-(chain[-2] % chain[-1]))
    chain.pop()
    return SturmChain(source=p, chain=tuple(chain))


def sign_changes(values: Sequence) -> int:
    """Strict sign alternations in a sequence, zeros ignored."""
    signs = [s for s in (exact_sign(v) for v in values) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _deflate(q: Poly, points) -> tuple[Poly, list[Fraction]]:
    hits = []
    for e in points:
        if q.degree >= 1 and q(e) == 0:
            q = q // Poly([-e, 1])
            hits.append(e)
    return q, hits


def sturm_count(p: Poly, lo, hi, open: bool = True) -> int:
    """Number of distinct real roots of ``p`` in ``(lo, hi)`` or ``[lo, hi]``.

    Endpoint roots are found by exact evaluation and divided out of the
    square-free part before the chain is built.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if p.is_zero():
        raise ValueError("the zero polynomial has infinitely many roots")
    if not lo < hi:
        raise ValueError("need lo < hi")
    q, hits = _deflate(squarefree(p), (lo, hi))
    if q.degree <= 0:
        inner = 0
    else:
        ch = sturm_chain(q)
        inner = ch.variations(lo) - ch.variations(hi)
    return inner if open else inner + len(hits)


def budan_fourier_count(p: Poly, lo, hi) -> int:
    """Budan-Fourier bound on the roots in ``(lo, hi]`` counted with multiplicity.

    The bound is at least the true count and has the same parity.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    derivs = [p.derivative(j) for j in range(max(p.degree, 0) + 1)]
    return sign_changes([d(lo) for d in derivs]) - sign_changes([d(hi) for d in derivs])


def _split_point(q: Poly, lo: Fraction, hi: Fraction) -> Fraction:
    # first non-root among the midpoint and nearby dyadic offsets
    width = hi - lo
    for num, den in ((1, 2), (1, 3), (2, 3), (1, 4), (3, 4), (1, 5), (4, 5)):
        x = lo + width * Fraction(num, den)
        if q(x) != 0:
            return x
    k = 6
    while True:
        x = lo + width / k
        if q(x) != 0:
            return x
        k += 1


def isolate_roots(p: Poly, lo, hi, eps=DEFAULT_WIDTH, open: bool = True) -> list[IsolatingInterval]:
    """Disjoint intervals of width at most ``eps``, one per distinct root.

    Roots in ``(lo, hi)`` are isolated; with ``open=False`` a root sitting
    exactly on ``lo`` or ``hi`` is also reported, as a small interval centred
    on it.  Every interval has non-root endpoints and Sturm count 1.
    """
    lo, hi, eps = Fraction(lo), Fraction(hi), Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    q, hits = _deflate(squarefree(p), (lo, hi))
    chain = sturm_chain(q) if q.degree >= 1 else None

    def count(a: Fraction, b: Fraction) -> int:
        if chain is None:
            return 0
        return chain.variations(a) - chain.variations(b)

    out: list[IsolatingInterval] = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        n = count(a, b)
        if n == 0:
            continue
        if n == 1 and b - a <= eps:
            out.append(IsolatingInterval(a, b))
            continue
        mid = _split_point(q, a, b)
        stack.append((mid, b))
        stack.append((a, mid))
    if not open:
        full = squarefree(p)
        for e in hits:
            out.append(_point_interval(full, e, eps))
    return sorted(out, key=lambda iv: iv.lo)


def _point_interval(p: Poly, r: Fraction, eps: Fraction) -> IsolatingInterval:
    delta = eps / 2
    while True:
        a, b = r - delta, r + delta
        if p(a) != 0 and p(b) != 0 and sturm_count(p, a, b) == 1:
            return IsolatingInterval(a, b)
        delta /= 2
