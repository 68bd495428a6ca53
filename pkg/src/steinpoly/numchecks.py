"""Quadrature cross-checks of the normal product identities."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .bessel import EULER_GAMMA, bessel_k, density, k0, k1
from .exact import Poly
from .family import make_stein_op_d2, stein_poly
from .quadrature import DEFAULT, QuadratureConfig, quad_semiinf, quad_symmetric


def gamma_half_integer(z: Fraction) -> float:
    """``Gamma(z)`` for positive ``z`` in (1/2)Z via ``Gamma(z+1) = z Gamma(z)``."""
    z = Fraction(z)
    if z <= 0 or (2 * z).denominator != 1:
        raise ValueError("Gamma seed table covers positive multiples of 1/2 only")
    if z.denominator == 1:
        acc, base = 1.0, Fraction(1)
    else:
        acc, base = math.sqrt(math.pi), Fraction(1, 2)
    while base < z:
        acc *= float(base)
        base += 1
    return acc


@dataclass(frozen=True)
class IntegralCheck:
    mu: int
    nu: int
    numeric: float
    closed_form: float

    @property
    def residual(self) -> float:
        return abs(self.numeric - self.closed_form)


def integral_closed_form(mu, nu: int) -> float:
    """``2^(mu-1) Gamma((1+mu+nu)/2) Gamma((1+mu-nu)/2)``."""
    mu = Fraction(mu)
    if mu + 1 - nu <= 0 or mu + 1 + nu <= 0:
        raise ValueError(f"integral of x^{mu} K_{nu} diverges (need mu + 1 +- nu > 0)")
    return 2.0 ** float(mu - 1) * gamma_half_integer((1 + mu + nu) / 2) * gamma_half_integer((1 + mu - nu) / 2)


def check_integral_formula(mu: int, nu: int, cfg: QuadratureConfig = DEFAULT) -> IntegralCheck:
    """Compare ``int_0^inf x^mu K_nu(x) dx`` by quadrature with its closed form."""
    if nu not in (0, 1):
        raise ValueError("nu must be 0 or 1")
    if Fraction(mu).denominator != 1:
        raise ValueError("mu must be an integer so the Gamma arguments are half-integers")
    closed = integral_closed_form(mu, nu)
    mu = int(mu)
    numeric = quad_semiinf(lambda x: x**mu * bessel_k(nu, x), cfg)
    return IntegralCheck(mu=mu, nu=nu, numeric=numeric, closed_form=closed)


def expect_numeric(p: Poly, cfg: QuadratureConfig = DEFAULT) -> float:
    """``E[p(N_1 N_2)]`` by quadrature against ``K_0(|x|)/pi``."""
    return quad_symmetric(lambda x: p(x) * density(x), cfg)


def _adjoint_sides(f: Poly, g: Poly, form: str, cfg: QuadratureConfig) -> tuple[float, float]:
    R = make_stein_op_d2()
    rf = R.apply(f)
    lhs = quad_symmetric(lambda x: rf(x) * g(x) * density(x), cfg)
    gp = g.derivative()
    if form == "statement":
        # R* g = R g + theta g' - x g, with theta p = 2|x| K_1(|x|)/pi
        rest = R.apply(g) - Poly.x() * g
        a = quad_symmetric(lambda x: f(x) * rest(x) * density(x), cfg)
        b = quad_symmetric(lambda x: f(x) * gp(x) * 2 * abs(x) * k1(abs(x)) / math.pi, cfg)
        return lhs, a + b
    if form == "proof":
        # R* g = (theta - 1) g' - x g''
        gpp = g.derivative(2)
        a = quad_symmetric(lambda x: f(x) * (-gp(x) - x * gpp(x)) * density(x), cfg)
        b = quad_symmetric(lambda x: f(x) * gp(x) * 2 * abs(x) * k1(abs(x)) / math.pi, cfg)
        return lhs, a + b
    raise ValueError("form must be 'statement' or 'proof'")


def adjoint_residual(f: Poly, g: Poly, form: str = "statement", cfg: QuadratureConfig = DEFAULT) -> float:
    """``|E[(R f) g] - E[f (R* g)]|`` under the normal product law."""
    if f.degree > 6 or g.degree > 6:
        raise ValueError("adjoint check is limited to degree <= 6")
    lhs, rhs = _adjoint_sides(f, g, form, cfg)
    return abs(lhs - rhs)


def finite_difference_order(x: float, h0: float = 1e-2) -> tuple[float, float]:
    """Error of the central difference of K_0 against ``-K_1`` and its observed order."""
    def err(h):
        return abs((k0(x + h) - k0(x - h)) / (2 * h) + k1(x))

    e1, e2 = err(h0), err(h0 / 2)
    return e2, math.log2(e1 / e2)


def quadcheck(cfg: QuadratureConfig = DEFAULT) -> list[dict]:
    """Run every numeric identity and return one row per check."""
    rows: list[dict] = []

    def row(name, value, target, tol):
        rows.append({"check": name, "value": value, "target": target, "residual": abs(value - target), "tol": tol,
                     "pass": abs(value - target) <= tol})

    row("normalization", 2 / math.pi * quad_semiinf(k0, cfg), 1.0, 1e-10)
    for n in range(1, 5):
        target = float(math.prod(range(2 * n - 1, 0, -2)) ** 2)
        row(f"moment_{2 * n}", 2 / math.pi * quad_semiinf(lambda x, n=n: x ** (2 * n) * k0(x), cfg), target, 1e-7 * target)
    for n in range(1, 11):
        row(f"E[P_{n}]", expect_numeric(stein_poly(n), cfg), 0.0, 1e-7)
    for mu, nu in ((0, 0), (2, 0), (4, 0), (1, 1), (3, 1)):
        c = check_integral_formula(mu, nu, cfg)
        row(f"int x^{mu} K_{nu}", c.numeric, c.closed_form, 1e-8 * c.closed_form)
    for form in ("statement", "proof"):
        worst = max(
            adjoint_residual(Poly.monomial(i), Poly.monomial(j), form, cfg) for i in range(5) for j in range(5)
        )
        row(f"adjoint_{form}_max_residual_deg4", worst, 0.0, 1e-6)
    from .bessel import theta

    # theta grows like 2|x| at infinity and decays like 2/log(1/x) at zero
    row("theta(100)/100", theta(100.0) / 100.0, 2.0, 1e-2)
    row("theta(1e-100)", theta(1e-100), 0.0, 1e-2)
    row("theta(1e-8)*(-log(1e-8/2)-gamma)", theta(1e-8) * (-math.log(0.5e-8) - EULER_GAMMA), 2.0, 1e-6)
    for x in (0.5, 1.0, 5.0):
        _, order = finite_difference_order(x)
        row(f"K0'=-K1 fd order at {x}", order, 2.0, 0.1)
    return rows
