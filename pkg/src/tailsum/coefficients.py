"""Weight sequences ``a_n`` for the series ``S = sum_n a_n X_n``.

Two families are supported, both with closed-form tails so that the
normalising constants used downstream are exact:

* ``Geometric(rho, scale)``: ``a_n = scale * rho**n``
* ``Polynomial(c, s)``: ``a_n = c * n**-s`` with ``s > 2``

Infinite sums of powers of ``a_n`` (and of ``n * a_n``) are available in
closed form for the geometric family and through the Hurwitz zeta function
for the polynomial family.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import zeta

from .distributions import CenteredPareto, Distribution

__all__ = [
    "CoefficientSequence",
    "Geometric",
    "Polynomial",
    "KappaClass",
    "normalize_problem",
    "make_sequence",
]


class KappaClass(enum.Enum):
    """Decay class of ``a_n``: ``sup{k : limsup n**k a_n < inf}`` finite or not."""

    FINITE = "finite"
    INFINITE = "infinite"


def _as_index(n):
    n = np.asarray(n)
    if np.any(n < 1):
        raise ValueError("coefficient index must be >= 1")
    return n


class CoefficientSequence:
    """Interface shared by the weight families.

    Subclasses implement :meth:`coeff`, :meth:`power_tail` and
    :meth:`moment_tail`; the aggregate sums are derived from those.
    """

    def coeff(self, n):
        raise NotImplementedError

    def power_tail(self, p: float, m):
        """``sum_{k > m} a_k**p`` for integer ``m >= 0`` (array-aware)."""
        raise NotImplementedError

    def moment_tail(self, p: float, m):
        """``sum_{k > m} k * a_k**p`` for integer ``m >= 0``."""
        raise NotImplementedError

    def kappa_class(self) -> KappaClass:
        raise NotImplementedError

    def scaled(self, factor: float) -> "CoefficientSequence":
        """The sequence ``factor * a_n``."""
        raise NotImplementedError

    def power_sum(self, p: float) -> float:
        return float(self.power_tail(p, 0))

    def sum_a(self) -> float:
        return self.power_sum(1.0)

    def sum_n_a(self) -> float:
        return float(self.moment_tail(1.0, 0))

    def sum_a_alpha(self, alpha: float) -> float:
        if alpha <= 2:
            raise ValueError("alpha must be > 2")
        return self.power_sum(alpha)

    def sum_n_a_alpha(self, alpha: float) -> float:
        return float(self.moment_tail(alpha, 0))

    def sup(self) -> float:
        # both families are decreasing
        return float(self.coeff(1))

    def is_standard(self) -> bool:
        """Whether every ``a_n`` lies in (0, 1]."""
        return 0.0 < self.sup() <= 1.0

    def head(self, n: int) -> np.ndarray:
        """``[a_1, ..., a_n]`` as an array."""
        return np.asarray(self.coeff(np.arange(1, n + 1)), dtype=float)


@dataclass(frozen=True)
class Geometric(CoefficientSequence):
    rho: float
    scale: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.rho < 1.0:
            raise ValueError(f"rho must lie in (0, 1), got {self.rho!r}")
        if not self.scale > 0.0:
            raise ValueError("scale must be positive")

    def coeff(self, n):
        n = _as_index(n)
        out = self.scale * np.power(self.rho, n, dtype=float)
        return out[()] if np.ndim(out) == 0 else out

    def power_tail(self, p, m):
        q = self.rho**p
        out = self.scale**p * np.power(q, np.asarray(m) + 1.0) / (1.0 - q)
        return out[()] if np.ndim(out) == 0 else out

    def moment_tail(self, p, m):
        # sum_{k>m} k q^k = q^{m+1} ((m+1) - m q) / (1-q)^2
        q = self.rho**p
        m = np.asarray(m, dtype=float)
        out = self.scale**p * np.power(q, m + 1.0) * ((m + 1.0) - m * q) / (1.0 - q) ** 2
        return out[()] if np.ndim(out) == 0 else out

    def kappa_class(self):
        return KappaClass.INFINITE

    def scaled(self, factor):
        return replace(self, scale=self.scale * factor)


@dataclass(frozen=True)
class Polynomial(CoefficientSequence):
    c: float
    s: float

    def __post_init__(self):
        if not self.c > 0.0:
            raise ValueError("c must be positive")
        if not self.s > 2.0:
            raise ValueError(f"s must be > 2 so that sum n*a_n converges, got {self.s!r}")

    def coeff(self, n):
        n = _as_index(n)
        out = self.c * np.power(np.asarray(n, dtype=float), -self.s)
        return out[()] if np.ndim(out) == 0 else out

    def power_tail(self, p, m):
        out = self.c**p * zeta(self.s * p, np.asarray(m, dtype=float) + 1.0)
        return out[()] if np.ndim(out) == 0 else out

    def moment_tail(self, p, m):
        out = self.c**p * zeta(self.s * p - 1.0, np.asarray(m, dtype=float) + 1.0)
        return out[()] if np.ndim(out) == 0 else out

    def kappa_class(self):
        return KappaClass.FINITE

    def scaled(self, factor):
        return replace(self, c=self.c * factor)


def normalize_problem(seq: CoefficientSequence, dist: Distribution, b: float):
    """Rewrite ``P{sum a_n X_n > b}`` as an equivalent standard problem.

    Returns ``(seq', dist', b')`` with ``a'_n = a_n / sup a``, ``X' = X - E X``
    and ``b' = (b - E X * sum a_n) / sup a``.  Already-standard inputs
    (centred law and ``sup a < 1``) are returned unchanged.

    Raises
    ------
    ValueError
        If the transformed threshold is not positive.
    """
    sup = seq.sup()
    mean = dist.mean()
    if mean == 0.0 and sup < 1.0:
        return seq, dist, b
    b_new = (b - seq.sum_a() * mean) / sup
    if not b_new > 0.0:
        raise ValueError(
            f"normalised threshold {b_new:g} is not positive; the event is not a right tail"
        )
    new_dist = dist if mean == 0.0 else CenteredPareto(dist.alpha)
    return seq.scaled(1.0 / sup), new_dist, b_new


def make_sequence(kind: str, *params: float) -> CoefficientSequence:
    """Build a sequence from configuration: ``("geometric", rho)`` or ``("polynomial", c, s)``."""
    if kind == "geometric":
        (rho,) = params
        return Geometric(float(rho))
    if kind == "polynomial":
        c, s = params
        return Polynomial(float(c), float(s))
    raise ValueError(f"unknown coefficient family {kind!r}")
