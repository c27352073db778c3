"""Conditional Monte Carlo estimators of ``P{S_n > b} - P{S_{n-1} > b}``.

The increment is split according to which term ``a_i X_i`` is the largest
among the first ``n``:

* ``z1`` covers the case where the ``n``-th term is the maximum.  Given
  ``X_1..X_{n-1}`` the probability is available in closed form, so only
  those ``n - 1`` variables are drawn.
* ``z2`` covers the case where some earlier term ``J < n`` is the maximum.
  ``J`` is drawn with probability ``q(j, n) = a_j / sum_{i<n} a_i``, the
  other ``n - 1`` variables are drawn, and ``X_J`` is integrated out.

Both are unbiased and their sum ``zloc`` is unbiased for the increment.  For
``n = 1`` the pair collapses to the deterministic value ``P{a_1 X_1 > b}``.

The ``*_from_increments`` functions evaluate the estimators on given
realisations and are vectorised over leading axes; the sampling wrappers
draw those realisations from a numpy ``Generator``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coefficients import CoefficientSequence
from .distributions import Distribution

__all__ = [
    "LocalEstimate",
    "z1_from_increments",
    "z2_from_increments",
    "jn_pmf",
    "sample_jn",
    "estimator1",
    "estimator2",
    "local_simulation",
    "local_simulation_batch",
    "local_work",
]


@dataclass(frozen=True)
class LocalEstimate:
    n: int
    z1: float
    z2: float
    zloc: float
    work: int


def local_work(n):
    """Number of increment draws used by one local simulation at level ``n``."""
    return 2 * np.asarray(n) - 2


def _check_level(n):
    if int(n) != n or n < 1:
        raise ValueError(f"level n must be a positive integer, got {n!r}")
    return int(n)


def z1_from_increments(n: int, b: float, x, dist: Distribution, seq: CoefficientSequence):
    """``F((max(b - S_{n-1}, M_{n-1})) / a_n) * 1{S_{n-1} <= b}``.

    Parameters
    ----------
    x : array_like, shape (..., n - 1)
        Realisations of ``X_1, ..., X_{n-1}``.
    """
    n = _check_level(n)
    a = seq.head(n)
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != n - 1:
        raise ValueError(f"expected {n - 1} increments, got {x.shape[-1]}")
    terms = x * a[:-1]
    s_prev = terms.sum(axis=-1)
    m_prev = terms.max(axis=-1, initial=-np.inf)
    z = dist.tail(np.maximum(b - s_prev, m_prev) / a[-1])
    return np.where(s_prev <= b, z, 0.0)[()]


def jn_pmf(n: int, seq: CoefficientSequence) -> np.ndarray:
    """``q(j, n) = a_j / sum_{i<n} a_i`` for ``j = 1..n-1`` (index 0 holds ``j = 1``)."""
    n = _check_level(n)
    if n < 2:
        raise ValueError("J_n is only defined for n >= 2")
    a = seq.head(n - 1)
    return a / a.sum()


def z2_from_increments(n: int, b: float, j, y, dist: Distribution, seq: CoefficientSequence):
    """``(Z21 - Z22) / q(J, n)`` for a realised ``J = j`` and the other increments.

    Parameters
    ----------
    j : int or array_like of int
        Realised index in ``1..n-1``.
    y : array_like, shape (..., n - 1)
        Realisations of ``X_i`` for ``i = 1..n, i != j``, in increasing ``i``.
        The last entry is always ``X_n``.
    """
    n = _check_level(n)
    if n == 1:
        return np.zeros(np.shape(y)[:-1])[()]
    a = seq.head(n)
    q = jn_pmf(n, seq)
    j = np.asarray(j)
    y = np.asarray(y, dtype=float)
    if y.shape[-1] != n - 1:
        raise ValueError(f"expected {n - 1} increments, got {y.shape[-1]}")
    if np.any((j < 1) | (j > n - 1)):
        raise ValueError("J must lie in 1..n-1")
    cols = np.arange(n - 1)
    # 0-based position of each entry of y among 1..n, skipping j
    pos = cols + (cols >= (j[..., None] - 1))
    terms = a[pos] * y
    s_minus = terms.sum(axis=-1)
    m_minus = terms.max(axis=-1)
    s_prev_minus = s_minus - terms[..., -1]
    a_j = a[j - 1]
    z21 = dist.tail(np.maximum(b - s_minus, m_minus) / a_j)
    z22 = dist.tail(np.maximum(b - s_prev_minus, m_minus) / a_j)
    return ((z21 - z22) / q[j - 1])[()]


def sample_jn(n: int, seq: CoefficientSequence, rng: np.random.Generator, size=None):
    """Draw ``J_n`` from ``q(., n)`` by inverse CDF over ``1..n-1``."""
    q = jn_pmf(n, seq)
    cdf = np.cumsum(q)
    u = rng.random(size)
    idx = np.searchsorted(cdf, u * cdf[-1], side="right")
    out = np.minimum(idx, n - 2) + 1
    return out[()] if np.ndim(out) == 0 else out


def estimator1(n: int, b: float, dist: Distribution, seq: CoefficientSequence,
               rng: np.random.Generator, size=None):
    """Draw ``z1(n, b)``; returns ``(z1, work)`` with ``work = n - 1`` draws per sample."""
    n = _check_level(n)
    shape = () if size is None else tuple(np.atleast_1d(size))
    x = dist.sample(rng, shape + (n - 1,))
    return z1_from_increments(n, b, x, dist, seq), n - 1


def estimator2(n: int, b: float, dist: Distribution, seq: CoefficientSequence,
               rng: np.random.Generator, size=None):
    """Draw ``z2(n, b)``; returns ``(z2, work)``.  Zero with no draws when ``n == 1``."""
    n = _check_level(n)
    shape = () if size is None else tuple(np.atleast_1d(size))
    if n == 1:
        return np.zeros(shape)[()], 0
    j = sample_jn(n, seq, rng, shape)
    y = dist.sample(rng, shape + (n - 1,))
    return z2_from_increments(n, b, j, y, dist, seq), n - 1


def local_simulation(n: int, b: float, dist: Distribution, seq: CoefficientSequence,
                     rng: np.random.Generator) -> LocalEstimate:
    """One draw of ``zloc(n, b) = z1 + z2`` on independent increments."""
    z1, w1 = estimator1(n, b, dist, seq, rng)
    z2, w2 = estimator2(n, b, dist, seq, rng)
    z1, z2 = float(z1), float(z2)
    return LocalEstimate(n=int(n), z1=z1, z2=z2, zloc=z1 + z2, work=w1 + w2)


def local_simulation_batch(n: int, b: float, dist: Distribution, seq: CoefficientSequence,
                           rng: np.random.Generator, size: int):
    """``size`` independent draws at a fixed level; returns arrays ``(z1, z2)``."""
    z1, _ = estimator1(n, b, dist, seq, rng, size)
    z2, _ = estimator2(n, b, dist, seq, rng, size)
    return np.asarray(z1), np.asarray(z2)
