"""Randomised truncation level and the unbiased estimator of ``P{S > b}``.

The level ``N`` has law ``p_n = c_b * (a_n**alpha + a_n / b**r)``.  A run draws
``N``, one local estimate ``zloc(N, b)`` and returns ``zloc / p_N``.  The
support of ``N`` is never truncated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .coefficients import CoefficientSequence
from .distributions import Distribution
from .local_estimator import local_simulation, local_simulation_batch, local_work

__all__ = ["OuterLaw", "estimate_once", "estimate_batch"]


@dataclass(frozen=True)
class OuterLaw:
    """Law of the truncation level ``N`` for threshold ``b``.

    Parameters
    ----------
    b : float
        Threshold of the tail probability.
    seq : CoefficientSequence
    alpha : float
        Tail index of the increments.
    r : float
        Exponent of the ``a_n / b**r`` term; must be ``>= 0``.
    """

    b: float
    seq: CoefficientSequence
    alpha: float
    r: float = 1.0
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.b > 0:
            raise ValueError("threshold b must be positive")
        if not self.r >= 0:
            raise ValueError("r must be non-negative")

    @cached_property
    def weight(self) -> float:
        """Multiplier ``b**-r`` of the ``a_n`` term."""
        return float(np.exp(-self.r * np.log(self.b)))

    @cached_property
    def c_b(self) -> float:
        return 1.0 / (self.seq.sum_a_alpha(self.alpha) + self.weight * self.seq.sum_a())

    def pmf(self, n):
        a = self.seq.coeff(n)
        return self.c_b * (a**self.alpha + a * self.weight)

    def sf(self, n):
        """``P{N > n}`` from closed-form tails of the weight sums."""
        n = np.asarray(n)
        out = self.c_b * (self.seq.power_tail(self.alpha, n) + self.weight * self.seq.power_tail(1.0, n))
        return out[()] if np.ndim(out) == 0 else out

    def cdf(self, n):
        return 1.0 - self.sf(n)

    def mean(self) -> float:
        """``E N = c_b * (sum n a_n**alpha + sum n a_n / b**r)``."""
        return self.c_b * (
            self.seq.sum_n_a_alpha(self.alpha) + self.weight * self.seq.sum_n_a()
        )

    def _sf_table(self, upto: int) -> np.ndarray:
        table = self._cache.get("sf")
        if table is None or len(table) < upto:
            table = np.asarray(self.sf(np.arange(1, upto + 1)), dtype=float)
            self._cache["sf"] = table
        return table

    def sample_level(self, rng: np.random.Generator, size=None):
        """Draw ``N`` by inverse CDF.

        With ``V = 1 - U`` in (0, 1], ``N`` is the first ``n`` with
        ``P{N > n} < V``.  The survival table is extended until every draw is
        resolved, so no truncation is involved.
        """
        v = 1.0 - rng.random(size)
        vmin = np.min(v)
        upto = 64
        table = self._sf_table(upto)
        while table[-1] >= vmin:
            upto *= 2
            table = self._sf_table(upto)
        # table is decreasing; count entries >= v
        idx = np.searchsorted(-table, -v, side="right")
        out = idx + 1
        return out[()] if np.ndim(out) == 0 else out


def estimate_once(law: OuterLaw, dist: Distribution, seq: CoefficientSequence,
                  rng: np.random.Generator):
    """One replication of ``Z(b) = zloc(N, b) / p_N``.

    Returns
    -------
    z : float
    n_used : int
    work : int
        Increment draws made by the local simulation.
    """
    n = int(law.sample_level(rng))
    loc = local_simulation(n, law.b, dist, seq, rng)
    return loc.zloc / float(law.pmf(n)), n, loc.work


def estimate_batch(law: OuterLaw, dist: Distribution, seq: CoefficientSequence,
                   rng: np.random.Generator, size: int):
    """``size`` independent replications of ``Z(b)``, vectorised by level.

    All levels are drawn first; replications sharing a level are then simulated
    together in increasing order of the level.

    Returns
    -------
    z, levels, work : ndarray
    """
    levels = np.atleast_1d(law.sample_level(rng, size))
    z = np.empty(size)
    for n in np.unique(levels):
        mask = levels == n
        z1, z2 = local_simulation_batch(int(n), law.b, dist, seq, rng, int(mask.sum()))
        z[mask] = (z1 + z2) / law.pmf(int(n))
    return z, levels, local_work(levels)
