"""Seeded Monte Carlo sampling of second chaos elements.

Draws are produced in fixed-size blocks; block ``j`` of stream ``s`` is
generated by a Philox generator keyed by ``SeedSequence(seed,
spawn_key=(s, j))``, and normals come from inverting the normal CDF.  Shards
take contiguous block ranges and their statistics are merged in block
order, so an estimate does not depend on the shard count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np
from scipy.special import ndtri

from .chaos import SpectralElement, expect_poly
from .exact import Poly

BLOCK = 1 << 15
_U53 = float(1 << 53)


@dataclass(frozen=True)
class McEstimate:
    """A sample mean with two standard errors.

    ``stderr`` is ``sample_std / sqrt(n)``.  ``exact_stderr`` uses the exact
    variance instead; for polynomials of heavy-tailed laws the sample standard
    deviation is usually far too small, so calibrated comparisons use it.
    """

    mean: float
    stderr: float
    n_samples: int
    seed: int
    exact: float | None = None
    exact_stderr: float | None = None

    def z_score(self, calibrated: bool = False) -> float | None:
        se = self.exact_stderr if calibrated else self.stderr
        if self.exact is None or not se:
            return None
        return (self.mean - self.exact) / se

    def within(self, k: float = 4.0, calibrated: bool = False) -> bool:
        if self.exact is None:
            raise ValueError("no exact value attached")
        se = self.exact_stderr if calibrated else self.stderr
        if se is None:
            raise ValueError("no exact variance attached")
        return abs(self.mean - self.exact) <= k * se


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < 1 << 64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    return seed


def _block(lams: np.ndarray, seed: int, stream: int, index: int, size: int) -> np.ndarray:
    ss = np.random.SeedSequence(seed, spawn_key=(stream, index))
    gen = np.random.Generator(np.random.Philox(ss))
    bits = gen.integers(0, 1 << 53, size=(size, lams.size), dtype=np.uint64)
    z = ndtri((bits.astype(np.float64) + 0.5) / _U53)
    return (z * z - 1.0) @ lams


def _block_sizes(n: int) -> list[int]:
    full, rest = divmod(n, BLOCK)
    return [BLOCK] * full + ([rest] if rest else [])


def iter_blocks(elem: SpectralElement, n: int, seed: int, stream: int = 0) -> Iterator[np.ndarray]:
    """Yield the draws of ``F = sum lam_k (Z_k^2 - 1)`` block by block."""
    if n < 1:
        raise ValueError("n must be >= 1")
    lams = np.asarray(elem.float_lambdas(), dtype=np.float64)
    seed = _check_seed(seed)
    for j, size in enumerate(_block_sizes(n)):
        yield _block(lams, seed, stream, j, size)


def sample_element(elem: SpectralElement, n: int, seed: int, stream: int = 0) -> np.ndarray:
    """``n`` i.i.d. draws of the element, deterministic in ``(seed, stream)``."""
    return np.concatenate(list(iter_blocks(elem, n, seed, stream)))


def _merge(a: tuple[int, float, float], b: tuple[int, float, float]) -> tuple[int, float, float]:
    na, ma, sa = a
    nb, mb, sb = b
    if na == 0:
        return b
    n = na + nb
    delta = mb - ma
    return n, ma + delta * nb / n, sa + sb + delta * delta * na * nb / n


def estimate_expect_poly(
    elem: SpectralElement,
    p: Poly,
    n: int,
    seed: int,
    shards: int = 1,
    stream: int = 0,
    exact: bool = True,
) -> McEstimate:
    """Sample mean of ``p(F)`` with its standard error.

    With ``exact=True`` the exact expectation is attached when the element
    supports it.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if shards < 1:
        raise ValueError("shards must be >= 1")
    lams = np.asarray(elem.float_lambdas(), dtype=np.float64)
    seed = _check_seed(seed)
    sizes = _block_sizes(n)

    def block_stats(j: int) -> tuple[int, float, float]:
        vals = p(_block(lams, seed, stream, j, sizes[j]))
        mean = float(vals.mean())
        return vals.size, mean, float(((vals - mean) ** 2).sum())

    if shards == 1 or len(sizes) == 1:
        stats = [block_stats(j) for j in range(len(sizes))]
    else:
        chunks = np.array_split(np.arange(len(sizes)), min(shards, len(sizes)))
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            parts = pool.map(lambda idx: [block_stats(int(j)) for j in idx], chunks)
            stats = [s for part in parts for s in part]
    total = (0, 0.0, 0.0)
    for s in stats:
        total = _merge(total, s)
    count, mean, m2 = total
    stderr = math.sqrt(m2 / (count - 1) / count) if count > 1 else math.inf
    ex = ex_se = None
    if exact:
        try:
            ex = float(expect_poly(elem, p))
            ex_se = math.sqrt(float(exact_variance(elem, p)) / count)
        except ValueError:
            ex = ex_se = None
    return McEstimate(mean=mean, stderr=stderr, n_samples=count, seed=seed, exact=ex, exact_stderr=ex_se)


def exact_variance(elem: SpectralElement, p: Poly):
    """``Var(p(F))`` from exact moments up to ``2 deg p``."""
    mean = expect_poly(elem, p)
    return expect_poly(elem, p * p) - mean * mean


def required_samples(elem: SpectralElement, p: Poly, target_stderr: float) -> int:
    """Smallest ``n`` whose standard error is at most ``target_stderr``."""
    var = float(exact_variance(elem, p))
    return max(2, math.ceil(var / target_stderr**2))


@dataclass(frozen=True)
class TracePoint:
    label: str
    estimate: McEstimate

    @property
    def exact(self) -> float | None:
        return self.estimate.exact


def convergence_trace(
    path: Sequence[SpectralElement],
    p: Poly,
    n: int,
    seed: int,
    labels: Sequence[str] | None = None,
    shards: int = 1,
) -> list[TracePoint]:
    """One estimate of ``E[p(F)]`` per element of ``path`` (stream = position)."""
    if not path:
        raise ValueError("path must be nonempty")
    labels = list(labels) if labels is not None else [str(i) for i in range(len(path))]
    return [
        TracePoint(label, estimate_expect_poly(elem, p, n, seed, shards=shards, stream=i))
        for i, (label, elem) in enumerate(zip(labels, path))
    ]


def mixture_trace(ts: Sequence, n_poly: int, n: int, seed: int, shards: int = 1) -> list[TracePoint]:
    """Trace of ``E[P_(n_poly)(F_t)]`` along ``F_t = sqrt(t) F + sqrt(1-t) G``."""
    from .chaos import mixture_element
    from .family import stein_poly

    path = [mixture_element(t) for t in ts]
    return convergence_trace(path, stein_poly(n_poly), n, seed, labels=[str(t) for t in ts], shards=shards)
