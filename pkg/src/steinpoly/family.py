"""The Stein-operator polynomial family of the normal product law.

``P_n = R^n 1`` with ``R f = x f - f' - x f''``, constructed and
cross-checked several ways: operator iteration, the coefficient
recursion, nested-sum closed forms, the exponential generating function
``exp(x tanh t) / cosh t`` and the lowering operator ``arctanh(D)``.
The Hermite family (``H_n = L^n 1`` with ``L f = x f - f'``) and the
``W_k`` polynomials are built with the same machinery.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .exact import DiffOp, Poly, PowerSeries
from .exact.series import arctanh_series, cosh_series, inv_sqrt_one_minus_sq, tanh_series

X = Poly.x()
ONE = Poly([1])


def _as_poly(c) -> Poly:
    return c if isinstance(c, Poly) else Poly([c])


def make_stein_op_d2() -> DiffOp:
    """``f -> x f - f' - x f''``."""
    return DiffOp({0: X, 1: Poly([-1]), 2: -X})


def make_ou_op() -> DiffOp:
    """``f -> x f - f'``, the raising operator of the Hermite polynomials."""
    return DiffOp({0: X, 1: Poly([-1])})


def make_mb_op(nu: int = 0) -> DiffOp:
    """Modified Bessel operator ``f -> x^2 f'' + x f' - (x^2 + nu^2) f``."""
    return DiffOp({0: Poly([-(nu * nu), 0, -1]), 1: X, 2: Poly([0, 0, 1])})


@dataclass(frozen=True)
class FamilyTable:
    op: DiffOp
    polys: tuple[Poly, ...]
    coeff_matrix: tuple[tuple[Fraction, ...], ...] = field(repr=False)

    @property
    def max_n(self) -> int:
        return len(self.polys) - 1

    def __getitem__(self, n: int) -> Poly:
        return self.polys[n]

    def coeff(self, n: int, k: int) -> Fraction:
        if 0 <= k <= n:
            return self.coeff_matrix[n][k]
        return Fraction(0)


def generate_family(op: DiffOp, N: int) -> FamilyTable:
    """Iterate ``op`` on 1 to obtain ``P_0, ..., P_N``."""
    if N < 0:
        raise ValueError("N must be >= 0")
    polys = [ONE]
    for _ in range(N):
        polys.append(op.apply(polys[-1]))
    matrix = tuple(tuple(p[k] for k in range(n + 1)) for n, p in enumerate(polys))
    return FamilyTable(op=op, polys=tuple(polys), coeff_matrix=matrix)


@lru_cache(maxsize=8)
def stein_family(N: int) -> FamilyTable:
    return generate_family(make_stein_op_d2(), N)


@lru_cache(maxsize=8)
def hermite_family(N: int) -> FamilyTable:
    return generate_family(make_ou_op(), N)


def stein_poly(n: int) -> Poly:
    return stein_family(max(n, 16))[n]


def hermite_poly(n: int) -> Poly:
    return hermite_family(max(n, 16))[n]


# -- coefficients -------------------------------------------------------------

def coeff_by_recursion(N: int) -> list[list[int]]:
    """Triangular array ``a[n][k]`` from ``a(n,k) = a(n-1,k-1) - (k+1)^2 a(n-1,k+1)``.

    Entries outside ``0 <= k <= n`` are taken as zero; ``a[0] = [1]``.
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    a: list[list[int]] = [[1]]
    for n in range(1, N + 1):
        prev = a[-1]

        def at(k: int) -> int:
            return prev[k] if 0 <= k < len(prev) else 0

        a.append([at(k - 1) - (k + 1) ** 2 * at(k + 1) for k in range(n + 1)])
    return a


@lru_cache(maxsize=None)
def _nested_square_sum(depth: int, upper: int) -> int:
    # sum_{i=1}^{upper} i^2 * S(depth-1, i+1), with S(0, .) = 1
    if depth == 0:
        return 1
    return sum(i * i * _nested_square_sum(depth - 1, i + 1) for i in range(1, upper + 1))


def coeff_closed_form(n: int, k: int) -> int:
    """``a(n, k)`` from the nested sum of squares.

    For ``n - k = 2j`` the value is ``(-1)^j`` times the ``j``-fold sum
    ``sum_{i1=1}^{k+1} i1^2 sum_{i2=1}^{i1+1} i2^2 ... sum_{ij=1}^{i(j-1)+1} ij^2``;
    odd ``n - k`` gives zero.
    """
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    gap = n - k
    if gap % 2:
        return 0
    j = gap // 2
    return (-1) ** j * _nested_square_sum(j, k + 1)


def constant_term_identity(n: int, table: list[list[int]] | None = None) -> dict:
    """Compare ``a(n,0)`` with the alternating sum ``4 sum (-1)^(k-1) a(n-2k, 2)``.

    Unrolling ``a(n,0) = 4 a(n-2,2) - a(n-2,0)`` down to ``a(0,0) = 1`` shows
    the sum misses the boundary term ``(-1)^(n/2)``; both forms are returned so
    the caller can see which one holds.
    """
    if n < 2 or n % 2:
        raise ValueError("n must be even and >= 2")
    a = table if table is not None and len(table) > n else coeff_by_recursion(n)

    def at(m: int, k: int) -> int:
        return a[m][k] if 0 <= k <= m else 0

    alt = 4 * sum((-1) ** (k - 1) * at(n - 2 * k, 2) for k in range(1, n // 2 + 1))
    corrected = alt + (-1) ** (n // 2)
    return {
        "n": n,
        "a_n0": a[n][0],
        "alternating_sum": alt,
        "alternating_sum_holds": a[n][0] == alt,
        "with_boundary_term": corrected,
        "with_boundary_term_holds": a[n][0] == corrected,
    }


def euler_numbers(N: int) -> list[Fraction]:
    """``E_0, ..., E_N`` with ``1/cosh t = sum E_n t^n / n!``."""
    if N < 0:
        raise ValueError("N must be >= 0")
    sech = PowerSeries.one(N) / cosh_series(N)
    return sech.egf()


# -- generating function and Sheffer data -------------------------------------

def generating_function_coeffs(N: int) -> list[Poly]:
    """``n! [t^n] exp(x tanh t) / cosh t`` for ``n = 0..N`` as polynomials in x."""
    if N < 0:
        raise ValueError("N must be >= 0")
    return [_as_poly(c) for c in generating_function_series(N).egf()]


def generating_function_series(N: int) -> PowerSeries:
    """The truncated series ``G(t, x)`` with Poly-in-x coefficients."""
    inner = tanh_series(N).scale(X)
    return inner.exp() / cosh_series(N)


def pde_residuals(N: int) -> list[Poly]:
    """Coefficients of ``G_t - (x G - G_x - x G_xx)`` for ``t^0 .. t^(N-1)``."""
    g = generating_function_series(N)
    op = make_stein_op_d2()
    lhs = g.derivative()
    rhs = g.truncate(N - 1).map(lambda c: op.apply(_as_poly(c)))
    return [_as_poly(c) for c in (lhs - rhs).coeffs]


@dataclass(frozen=True)
class ShefferPair:
    f: PowerSeries
    g: PowerSeries
    fbar: PowerSeries


def sheffer_pair(order: int) -> ShefferPair:
    """``f(t) = arctanh t``, ``g(t) = (1 - t^2)^(-1/2)``, ``fbar`` the inverse of ``f``."""
    f = arctanh_series(order)
    return ShefferPair(f=f, g=inv_sqrt_one_minus_sq(order), fbar=f.reversion())


def sheffer_generating_coeffs(pair: ShefferPair) -> list[Poly]:
    """Expand ``exp(x fbar(t)) / g(fbar(t))`` and return ``n!`` times its coefficients."""
    gf = pair.g.compose(pair.fbar)
    series = pair.fbar.scale(X).exp() / gf
    return [_as_poly(c) for c in series.egf()]


def lowering_apply(p: Poly, order: int | None = None) -> Poly:
    """Apply ``arctanh(D) = sum_k D^(2k+1) / (2k+1)`` to ``p``.

    The operator series is cut at derivative ``order`` (default ``deg p``),
    which is exact because higher derivatives of ``p`` vanish.
    """
    if order is None:
        order = max(p.degree, 0)
    if order < p.degree:
        raise ValueError("truncation order below the polynomial degree is not exact")
    out = Poly()
    for j in range(1, order + 1, 2):
        out = out + p.derivative(j) / j
    return out


def w_poly(k: int) -> Poly:
    """``(2k-1) (x int_0^x H_k H_(k-2) - H_k H_(k-2))``, monic of degree 2k."""
    if k < 2:
        raise ValueError("W_k needs k >= 2")
    hk, hk2 = hermite_poly(k), hermite_poly(k - 2)
    prod = hk * hk2
    return (X * prod.antiderivative() - prod).scale(2 * k - 1)


# -- three-term recurrence test ----------------------------------------------

@dataclass(frozen=True)
class ThreeTermFit:
    n: int
    consistent: bool
    c: Fraction | None
    d: Fraction | None
    demands: dict = field(default_factory=dict)
    mismatched_degrees: tuple[int, ...] = ()


def three_term_fit(family: FamilyTable, n: int) -> ThreeTermFit:
    """Test ``P_(n+1) = (x - c) P_n - d P_(n-1)`` for one ``n``.

    ``c`` is read off the ``x^n`` coefficient of ``x P_n - P_(n+1)`` and
    ``d`` off its ``x^(n-1)`` coefficient; every other coefficient is then
    checked.  ``demands`` maps each degree that involves ``d`` to the value of
    ``d`` that degree alone would require.
    """
    if n < 1 or family.max_n < n + 1:
        raise ValueError("need 1 <= n and the family built up to n+1")
    pn, pm, pp = family[n], family[n - 1], family[n + 1]
    r = X * pn - pp
    c = r[n]
    d = (r[n - 1] - c * pn[n - 1]) / pm[n - 1]
    demands: dict[int, Fraction] = {}
    bad: list[int] = []
    for k in range(n + 1):
        rk = r[k] - c * pn[k]
        if pm[k] != 0:
            demands[k] = rk / pm[k]
        if rk != d * pm[k]:
            bad.append(k)
    ok = not bad
    return ThreeTermFit(n=n, consistent=ok, c=c, d=d, demands=demands, mismatched_degrees=tuple(bad))


def family_json(table: FamilyTable) -> list[dict]:
    from .exact import encode_number

    return [{"n": n, "coeffs": [encode_number(c) for c in p.coeffs]} for n, p in enumerate(table.polys)]


def appendix_a_golden() -> list[Poly]:
    """The P_0..P_15 table shipped as ``data/appendix_a.json``."""
    import json
    from importlib import resources

    from .exact import decode_poly

    raw = json.loads(resources.files("steinpoly").joinpath("data/appendix_a.json").read_text())
    return [decode_poly(entry) for entry in sorted(raw, key=lambda e: e["n"])]

