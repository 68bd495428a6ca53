"""Modified Bessel functions K_0, K_1 and the normal product density.

For ``x <= 2`` the ascending series (with the ``-log(x/2) I_nu`` coupling)
is summed; for ``x > 2`` Steed's continued fraction (the CF2 recurrence of
Temme's method) gives ``K_0`` and ``K_1`` together.  Both branches reach
double precision; beyond ``x ~ 745`` the result underflows to 0.0.
"""

from __future__ import annotations

import math
from functools import lru_cache

EULER_GAMMA = 0.57721566490153286060651209008240243
SPLIT = 2.0
_EPS = 1e-17
_UNDERFLOW = 745.0


def _series_k(x: float) -> tuple[float, float]:
    # K0 = -(log(x/2) + g) I0 + sum (x^2/4)^k/(k!)^2 H_k
    # K1 = 1/x + log(x/2) I1 - (x/4) sum (psi(k+1) + psi(k+2)) (x^2/4)^k / (k!(k+1)!)
    y = 0.25 * x * x
    lg = math.log(0.5 * x)
    term0 = 1.0  # (x^2/4)^k / (k!)^2
    term1 = 1.0  # (x^2/4)^k / (k!(k+1)!)
    harmonic = 0.0
    i0 = 0.0
    i1s = 0.0
    k0_tail = 0.0
    k1_tail = 0.0
    psi1 = -EULER_GAMMA  # psi(k+1)
    k = 0
    while True:
        psi2 = psi1 + 1.0 / (k + 1)  # psi(k+2)
        i0 += term0
        i1s += term1
        k0_tail += term0 * harmonic
        k1_tail += term1 * (psi1 + psi2)
        k += 1
        term0 *= y / (k * k)
        term1 *= y / (k * (k + 1))
        harmonic += 1.0 / k
        psi1 = psi2
        if term0 * (1.0 + harmonic) < _EPS * i0:
            break
    k0 = -(lg + EULER_GAMMA) * i0 + k0_tail
    i1 = 0.5 * x * i1s
    k1 = 1.0 / x + lg * i1 - 0.25 * x * k1_tail
    return k0, k1


def _steed_k(x: float) -> tuple[float, float]:
    # Steed's algorithm for the CF2 continued fraction at nu = 0 (Temme 1975)
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = delh = d
    q1, q2 = 0.0, 1.0
    a1 = 0.25
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(1, 100000):
        a -= 2 * i
        c = -a * c / (i + 1.0)
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < _EPS:
            break
    else:
        raise ArithmeticError(f"continued fraction for K at x={x} did not converge")
    k0 = math.sqrt(math.pi / (2.0 * x)) * math.exp(-x) / s
    k1 = k0 * (x + 0.5 - a1 * h) / x
    return k0, k1


@lru_cache(maxsize=1 << 17)
def _pair(x: float) -> tuple[float, float]:
    if x >= _UNDERFLOW:
        return 0.0, 0.0
    if x <= SPLIT:
        return _series_k(x)
    return _steed_k(x)


def bessel_k(nu: int, x: float) -> float:
    """``K_nu(x)`` for ``nu`` in {0, 1} and ``x > 0``."""
    if nu not in (0, 1):
        raise ValueError("only K_0 and K_1 are provided")
    x = float(x)
    if not x > 0:
        raise ValueError("K_nu(x) needs x > 0")
    return _pair(x)[nu]


def k0(x: float) -> float:
    return bessel_k(0, x)


def k1(x: float) -> float:
    return bessel_k(1, x)


def density(x: float) -> float:
    """Normal product density ``K_0(|x|) / pi`` (infinite at 0)."""
    ax = abs(float(x))
    if ax == 0:
        return math.inf
    return k0(ax) / math.pi


def theta(x: float) -> float:
    """``E(N_1^2 + N_2^2 | N_1 N_2 = x) = 2|x| K_1(|x|) / K_0(|x|)``."""
    ax = abs(float(x))
    if ax == 0:
        return 0.0
    k0v, k1v = _pair(ax)
    if k0v == 0.0:
        # ratio K1/K0 -> 1 + 1/(2x) + ... beyond underflow
        return 2 * ax * (1 + 0.5 / ax)
    return 2 * ax * k1v / k0v
