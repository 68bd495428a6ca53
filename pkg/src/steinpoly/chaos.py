"""Distributional calculus for second Wiener chaos elements.

An element ``F = sum_k lam_k (N_k^2 - 1)`` is determined by its spectral
vector, or equivalently by the power sums ``p_r = sum_k lam_k^r``.  Its
cumulants are ``kappa_r = 2^(r-1) (r-1)! p_r`` for ``r >= 2`` (``kappa_1 = 0``),
which turns every polynomial expectation into exact arithmetic.

Exact mode works over Q or a single quadratic field Q(sqrt(s)); elements
with other irrational coefficients use a private mpmath context with a
113-bit significand ("float mode").
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Sequence

import mpmath

from .exact import DiffOp, FieldMismatchError, Poly, QuadRational, decode_number, encode_number
from .family import FamilyTable, stein_family, stein_poly, w_poly

FLOAT_CTX = mpmath.MPContext()
FLOAT_CTX.prec = 113


class InsufficientOrderError(ValueError):
    """Raised when a computation needs more power sums than an element carries."""


def _is_float(x) -> bool:
    return isinstance(x, (float, FLOAT_CTX.mpf, mpmath.mpf))


def _to_ctx(x):
    """Convert an exact number to the float-mode context."""
    if isinstance(x, QuadRational):
        a = FLOAT_CTX.mpf(x.a.numerator) / x.a.denominator
        b = FLOAT_CTX.mpf(x.b.numerator) / x.b.denominator
        return a + b * FLOAT_CTX.sqrt(x.s)
    if isinstance(x, Fraction):
        return FLOAT_CTX.mpf(x.numerator) / x.denominator
    return FLOAT_CTX.mpf(x)


def _field_tag(values: Iterable) -> int | None:
    tags = {v.s for v in values if isinstance(v, QuadRational) and v.b != 0}
    if len(tags) > 1:
        raise FieldMismatchError(f"values span several quadratic fields {sorted(tags)}")
    return tags.pop() if tags else None


def _exact_or_float(values: Sequence):
    vals = list(values)
    if any(_is_float(v) for v in vals):
        return [_to_ctx(v) for v in vals], True
    out = []
    for v in vals:
        if isinstance(v, int):
            v = Fraction(v)
        if not isinstance(v, (Fraction, QuadRational)):
            raise TypeError(f"unsupported spectral value {v!r}")
        out.append(v)
    _field_tag(out)
    return out, False


@dataclass(frozen=True)
class SpectralElement:
    """A second-chaos law given by its spectral vector or its power sums.

    ``power_sums[r-1]`` is ``p_r``.  When ``lambdas`` is present further power
    sums are computed on demand, so ``max_order`` is unbounded.
    """

    power_sums: tuple = ()
    lambdas: tuple | None = None
    float_mode: bool = False

    @classmethod
    def from_lambdas(cls, lambdas: Sequence, order: int = 8) -> "SpectralElement":
        lams, fl = _exact_or_float(lambdas)
        lams = tuple(l for l in lams if l != 0)
        ps = tuple(sum((l**r for l in lams), _zero(fl)) for r in range(1, order + 1))
        return cls(power_sums=ps, lambdas=lams, float_mode=fl)

    @classmethod
    def from_power_sums(cls, power_sums: Sequence) -> "SpectralElement":
        ps, fl = _exact_or_float(power_sums)
        return cls(power_sums=tuple(ps), lambdas=None, float_mode=fl)

    @property
    def max_order(self) -> float:
        return math.inf if self.lambdas is not None else len(self.power_sums)

    def power_sum(self, r: int):
        if r < 1:
            raise ValueError("power sums start at r = 1")
        if r <= len(self.power_sums):
            return self.power_sums[r - 1]
        if self.lambdas is None:
            raise InsufficientOrderError(f"power sum p_{r} needed, element carries {len(self.power_sums)}")
        return sum((l**r for l in self.lambdas), _zero(self.float_mode))

    def field_tag(self) -> int | None:
        if self.float_mode:
            return None
        return _field_tag(list(self.power_sums) + list(self.lambdas or ()))

    def variance(self):
        return 2 * self.power_sum(2)

    def scaled(self, c) -> "SpectralElement":
        """The element ``c * F``."""
        if self.float_mode or _is_float(c):
            c = _to_ctx(c)
            fl = True
        else:
            fl = False
        lams = None if self.lambdas is None else tuple((_to_ctx(l) if fl else l) * c for l in self.lambdas)
        ps = tuple((_to_ctx(p) if fl else p) * c**r for r, p in enumerate(self.power_sums, start=1))
        return SpectralElement(power_sums=ps, lambdas=lams, float_mode=fl)

    def normalized(self) -> "SpectralElement":
        """Rescale to unit variance.

        Exact when ``sqrt(kappa_2)`` lies in the element's own field (Q or the
        single quadratic field already in use); otherwise a FieldMismatchError
        suggests float mode.
        """
        k2 = self.variance()
        if k2 == 0:
            raise ValueError("cannot normalize the zero element")
        if self.float_mode:
            return self.scaled(1 / FLOAT_CTX.sqrt(k2))
        if isinstance(k2, QuadRational):
            if k2.b != 0:
                raise FieldMismatchError("variance is irrational; use float mode to normalize")
            k2 = k2.a
        root = QuadRational.sqrt_of(k2, s=self.field_tag())
        return self.scaled(1 / root)

    def to_float_mode(self) -> "SpectralElement":
        if self.float_mode:
            return self
        lams = None if self.lambdas is None else tuple(_to_ctx(l) for l in self.lambdas)
        return SpectralElement(tuple(_to_ctx(p) for p in self.power_sums), lams, True)

    def float_lambdas(self) -> list[float]:
        if self.lambdas is None:
            raise ValueError("element is given by power sums only; sampling needs the spectral vector")
        return [float(l) for l in self.lambdas]

    def to_json(self) -> dict:
        enc = (lambda v: str(v)) if self.float_mode else encode_number
        if self.lambdas is not None:
            return {"lambdas": [enc(l) for l in self.lambdas]}
        return {"power_sums": [enc(p) for p in self.power_sums]}

    @classmethod
    def from_json(cls, obj: dict, order: int = 8) -> "SpectralElement":
        def dec(v):
            if isinstance(v, float):
                return v
            if isinstance(v, str) and any(ch in v for ch in ".eE") and "/" not in v:
                return FLOAT_CTX.mpf(v)
            return decode_number(v)

        if "lambdas" in obj:
            return cls.from_lambdas([dec(v) for v in obj["lambdas"]], order=order)
        if "power_sums" in obj:
            return cls.from_power_sums([dec(v) for v in obj["power_sums"]])
        raise ValueError("element JSON needs 'lambdas' or 'power_sums'")


def _zero(float_mode: bool):
    return FLOAT_CTX.mpf(0) if float_mode else Fraction(0)


def normal_product() -> SpectralElement:
    """``N_1 * N_2``, i.e. ``lam = (1/2, -1/2)``."""
    return SpectralElement.from_lambdas([Fraction(1, 2), Fraction(-1, 2)])


def f8_element() -> SpectralElement:
    """``(N_1^2 + N_2^2 - 2 N_3^2) / sqrt(12)``: ``lam = (-1/sqrt 3, 1/sqrt 12, 1/sqrt 12)``."""
    return SpectralElement.from_lambdas(
        [QuadRational(0, Fraction(-1, 3), 3), QuadRational(0, Fraction(1, 6), 3), QuadRational(0, Fraction(1, 6), 3)]
    )


def mixture_element(t) -> SpectralElement:
    """``sqrt(t) F + sqrt(1-t) G`` with ``F``, ``G`` independent normal products.

    Exact when ``sqrt(t)`` and ``sqrt(1-t)`` share a field; float mode otherwise.
    """
    if _is_float(t):
        tt = _to_ctx(t)
        r1, r2 = FLOAT_CTX.sqrt(tt), FLOAT_CTX.sqrt(1 - tt)
        return SpectralElement.from_lambdas([r1 / 2, -r1 / 2, r2 / 2, -r2 / 2])
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise ValueError("mixture weight must lie in [0, 1]")
    r1, r2 = QuadRational.sqrt_of(t), QuadRational.sqrt_of(1 - t)
    if len({r.s for r in (r1, r2) if isinstance(r, QuadRational)}) > 1:
        return mixture_element(float(t))
    return SpectralElement.from_lambdas([r1 / 2, -r1 / 2, r2 / 2, -r2 / 2])


# -- cumulants and moments --------------------------------------------------

def cumulants(elem: SpectralElement, N: int) -> list:
    """``[0, kappa_1, ..., kappa_N]`` (index equals order; ``kappa_1 = 0``)."""
    if N > elem.max_order:
        raise InsufficientOrderError(f"cumulants to order {N} need power sums to order {N}")
    kap = [_zero(elem.float_mode)] * (N + 1)
    for r in range(2, N + 1):
        kap[r] = 2 ** (r - 1) * factorial(r - 1) * elem.power_sum(r)
    return kap


def moments_from_cumulants(kappa: Sequence) -> list:
    """``[m_0, ..., m_N]`` from ``[*, kappa_1, ..., kappa_N]``.

    Uses ``m_n = sum_{r=1}^n C(n-1, r-1) kappa_r m_(n-r)``; entries may be
    any ring elements (rationals, quadratic numbers, polynomials).
    """
    N = len(kappa) - 1
    m: list = [1]
    for n in range(1, N + 1):
        acc = 0
        for r in range(1, n + 1):
            c = comb(n - 1, r - 1)
            acc = kappa[r] * m[n - r] * c + acc
        m.append(acc)
    return m


def cumulants_from_moments(m: Sequence) -> list:
    """Inverse of :func:`moments_from_cumulants` (requires ``m_0 = 1``)."""
    if m[0] != 1:
        raise ValueError("moment vector must start with m_0 = 1")
    N = len(m) - 1
    kap: list = [0] * (N + 1)
    for n in range(1, N + 1):
        acc = m[n]
        for r in range(1, n):
            acc = acc - comb(n - 1, r - 1) * kap[r] * m[n - r]
        kap[n] = acc
    return kap


def moments(elem: SpectralElement, N: int) -> list:
    return moments_from_cumulants(cumulants(elem, N))


def expect_poly(elem: SpectralElement, p: Poly, m: Sequence | None = None):
    """``E[p(F)]`` exactly (or in float mode for float-mode elements)."""
    deg = p.degree
    if deg < 0:
        return _zero(elem.float_mode)
    if m is None:
        m = moments(elem, deg)
    elif len(m) <= deg:
        raise InsufficientOrderError(f"need moments to order {deg}")
    acc = _zero(elem.float_mode)
    for k, c in enumerate(p.coeffs):
        if c != 0:
            acc = acc + (_to_ctx(c) if elem.float_mode else c) * m[k]
    return acc


# -- diagnostics ---------------------------------------------------------------

def double_factorial(n: int) -> int:
    return math.prod(range(n, 0, -2)) if n > 0 else 1


@dataclass(frozen=True)
class DiagnosticReport:
    kappa2: object
    kappa3: object
    delta_prime: object
    expect_p6: object
    identity_residual: object
    moment_radicand: object
    bound: float
    even_moment_gaps: dict = field(default_factory=dict)
    bound_label: str = "sqrt(E[P6(F)]), modulo an unspecified constant"

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, (Fraction, QuadRational, int)):
                return encode_number(v)
            return str(v)

        out = {}
        for name in ("kappa2", "kappa3", "delta_prime", "expect_p6", "identity_residual", "moment_radicand"):
            v = getattr(self, name)
            out[name] = enc(v)
            out[name + "_float"] = float(v)
        out["bound"] = self.bound
        out["bound_label"] = self.bound_label
        out["even_moment_gaps"] = {str(k): {"exact": enc(v), "float": float(v)} for k, v in self.even_moment_gaps.items()}
        return out


def p6_diagnostic(elem: SpectralElement, normalize: bool = False, gap_orders: Sequence[int] = (2, 3)) -> DiagnosticReport:
    """kappa_3, the sixth-cumulant criterion and ``E[P_6(F)]`` for one element.

    ``identity_residual`` is ``E[P_6] - 5! Delta' - 10 kappa_3^2`` and is zero
    exactly in exact mode.
    """
    k2 = elem.variance()
    if k2 == 0:
        raise ValueError("kappa_2 = 0: the zero element has no diagnostic")
    if normalize:
        elem = elem.normalized()
    elif (abs(k2 - 1) > 1e-12) if elem.float_mode else (k2 != 1):
        raise ValueError("element is not normalized (kappa_2 != 1); pass normalize=True")
    top = max(6, *(2 * k for k in gap_orders)) if gap_orders else 6
    kap = cumulants(elem, top)
    m = moments_from_cumulants(kap)
    delta = kap[6] / 120 - 2 * kap[4] / 6 + kap[2]
    e6 = expect_poly(elem, stein_poly(6), m)
    residual = e6 - 120 * delta - 10 * kap[3] * kap[3]
    radicand = (m[6] - 225) - 55 * (m[4] - 9)
    gaps = {k: m[2 * k] - double_factorial(2 * k - 1) for k in gap_orders}
    e6f = float(e6)
    return DiagnosticReport(
        kappa2=kap[2],
        kappa3=kap[3],
        delta_prime=delta,
        expect_p6=e6,
        identity_residual=residual,
        moment_radicand=radicand,
        bound=math.sqrt(e6f) if e6f > 0 else 0.0,
        even_moment_gaps=gaps,
    )


@dataclass(frozen=True)
class EvenMomentGap:
    k: int
    gap: object
    expect_w: object


def even_moment_diagnostic(m: Sequence, k: int) -> EvenMomentGap:
    """``m_(2k) - (2k-1)!!`` together with ``E[W_k(F)]`` from the same moments."""
    if len(m) <= 2 * k:
        raise InsufficientOrderError(f"need moments to order {2 * k}")
    if len(m) > 2 and m[2] != 1:
        raise ValueError("even-moment diagnostic assumes unit variance")
    w = w_poly(k)
    ew = sum((c * m[j] for j, c in enumerate(w.coeffs)), Fraction(0))
    return EvenMomentGap(k=k, gap=m[2 * k] - double_factorial(2 * k - 1), expect_w=ew)


def gaussian_moments(N: int) -> list[int]:
    return [0 if j % 2 else double_factorial(j - 1) for j in range(N + 1)]


# -- mixture polynomials -----------------------------------------------------

T = Poly.x()


def mixture_cumulants(N: int) -> list[Poly]:
    """Cumulants of ``sqrt(t) F + sqrt(1-t) G`` as polynomials in ``t``."""
    out: list = [Poly()] * (N + 1)
    one_minus = Poly([1, -1])
    for r in range(2, N + 1, 2):
        out[r] = (T ** (r // 2) + one_minus ** (r // 2)).scale(factorial(r - 1))
    return out


def mixture_q_poly(n: int) -> Poly:
    """``Q_n(t) = E[P_(2n)(sqrt(t) F + sqrt(1-t) G)]`` as an exact polynomial in t."""
    if n < 1:
        raise ValueError("Q_n needs n >= 1")
    m = moments_from_cumulants(mixture_cumulants(2 * n))
    p = stein_poly(2 * n)
    q = Poly()
    for k, c in enumerate(p.coeffs):
        q = q + m[k] * c
    if q(Fraction(0)) != 0 or q(Fraction(1)) != 0:
        raise ArithmeticError(f"Q_{n} does not vanish at both endpoints")
    return q


# -- Stein operator synthesis -------------------------------------------------

@dataclass(frozen=True)
class SteinOpSpec:
    d: int
    a: tuple
    b: tuple
    assembled: DiffOp
    normalized: DiffOp

    def coeff_a(self, l: int):
        return self.a[l - 1]

    def coeff_b(self, l: int):
        return self.b[l - 2]


def stein_coefficients(lambdas: Sequence) -> SteinOpSpec:
    """Stein operator of order ``d`` for ``F = sum lam_k (N_k^2 - 1)``.

    ``a_l = P^(l)(0) / (l! 2^(l-1))`` with ``P(x) = x prod (x - lam_k)`` and
    ``b_l = sum_{r=l}^{d+1} a_r kappa_(r-l+2) / (r-l+1)!``.  The assembled
    operator is ``sum_{l=2}^{d+1} (b_l - a_(l-1) x) D^(d+2-l) - a_(d+1) x``;
    ``normalized`` rescales it so the zeroth-order coefficient is ``+x``.
    """
    lams, fl = _exact_or_float(lambdas)
    if fl:
        raise ValueError("Stein synthesis runs in exact mode only")
    if any(l == 0 for l in lams):
        raise ValueError("spectral coefficients must be nonzero")
    d = len(lams)
    if d == 0:
        raise ValueError("need at least one spectral coefficient")
    P = Poly.x()
    for l in lams:
        P = P * Poly([-l, 1])
    a = tuple(P[l] / 2 ** (l - 1) for l in range(1, d + 2))
    kap = cumulants(SpectralElement.from_lambdas(lams), d + 1)
    b = tuple(
        sum((a[r - 1] * kap[r - l + 2] / factorial(r - l + 1) for r in range(l, d + 2)), Fraction(0))
        for l in range(2, d + 2)
    )
    terms: list[tuple[int, Poly]] = []
    for l in range(2, d + 2):
        terms.append((d + 2 - l, Poly([b[l - 2], -a[l - 2]])))
    terms.append((0, Poly([0, -a[d]])))
    op = DiffOp(terms)
    return SteinOpSpec(d=d, a=a, b=b, assembled=op, normalized=op.scale(-1 / a[d]))


def stein_residuals(synth: SteinOpSpec, elem: SpectralElement, max_j: int) -> list:
    """``E[(op x^j)(F)]`` for ``j = 0..max_j``; all zero for the element's own operator."""
    m = moments(elem, max_j + 1)
    return [expect_poly(elem, synth.assembled.apply(Poly.monomial(j)), m) for j in range(max_j + 1)]


# -- Turan inequality and basis decomposition ---------------------------------

@dataclass(frozen=True)
class TuranRow:
    n: int
    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs >= self.rhs

    @property
    def strict(self) -> bool:
        return self.lhs > self.rhs


def turan_check(N: int) -> list[TuranRow]:
    """``E[P_n^2] >= E[P_(n-1) P_(n+1)]`` under the normal product law, n = 1..N."""
    if N < 1:
        raise ValueError("N must be >= 1")
    fam = stein_family(N + 1)
    elem = normal_product()
    m = moments(elem, 2 * N + 2)
    rows = []
    for n in range(1, N + 1):
        lhs = expect_poly(elem, fam[n] * fam[n], m)
        rhs = expect_poly(elem, fam[n - 1] * fam[n + 1], m)
        rows.append(TuranRow(n, lhs, rhs))
    return rows


def decompose_in_family(p: Poly, family: FamilyTable) -> list:
    """Coefficients ``c_0..c_deg`` with ``p = sum c_n P_n`` (back-substitution)."""
    if p.degree > family.max_n:
        raise ValueError("family too short for this polynomial")
    r = p
    coeffs: list = [Fraction(0)] * (max(p.degree, 0) + 1)
    for n in range(p.degree, -1, -1):
        lead = family[n][n]
        if lead == 0:
            raise ValueError(f"P_{n} has no degree-{n} term")
        c = r[n] / lead
        coeffs[n] = c
        if c != 0:
            r = r - family[n].scale(c)
    if not r.is_zero():
        raise ArithmeticError("decomposition left a remainder")
    return coeffs
