"""Regularly varying increment laws with pure power tails.

Both laws are parameterised by the tail index ``alpha > 2``.  ``Pareto`` has
``P{X > x} = min(1, x**-alpha)``; ``CenteredPareto`` is the same variable
shifted by its mean so that ``E X = 0``.

Every method accepts scalars or numpy arrays and follows numpy broadcasting.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["Distribution", "Pareto", "CenteredPareto", "make_distribution"]


@dataclass(frozen=True)
class Distribution:
    """Base class for power-tailed laws ``X = Y - shift`` with ``P{Y > y} = y**-alpha`` on ``y >= 1``."""

    alpha: float

    def __post_init__(self):
        if not np.isfinite(self.alpha) or self.alpha <= 2:
            raise ValueError(f"tail index alpha must be > 2, got {self.alpha!r}")

    @property
    def shift(self) -> float:
        return 0.0

    @property
    def support_low(self) -> float:
        return 1.0 - self.shift

    def tail(self, x):
        """Survival function ``P{X > x}``."""
        y = np.asarray(x, dtype=float) + self.shift
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = np.where(y > 1.0, np.exp(-self.alpha * np.log(np.maximum(y, 1.0))), 1.0)
        return out[()] if out.ndim == 0 else out

    def cdf(self, x):
        """``P{X <= x}``, computed as ``1 - tail(x)``."""
        return 1.0 - self.tail(x)

    def pdf(self, x):
        y = np.asarray(x, dtype=float) + self.shift
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(
                y >= 1.0, self.alpha * np.exp(-(self.alpha + 1.0) * np.log(np.maximum(y, 1.0))), 0.0
            )
        return out[()] if out.ndim == 0 else out

    def quantile_upper(self, u):
        """Inverse of the survival function: the ``x`` with ``tail(x) == u`` for ``u`` in (0, 1]."""
        u = np.asarray(u, dtype=float)
        out = u ** (-1.0 / self.alpha) - self.shift
        return out[()] if out.ndim == 0 else out

    def sample(self, rng: np.random.Generator, size=None):
        """Inverse-transform draws.

        ``rng.random`` yields values in [0, 1); ``1 - U`` is used so the
        uniform fed to the quantile map lies in (0, 1].
        """
        u = 1.0 - rng.random(size)
        return self.quantile_upper(u)

    def mean(self) -> float:
        return self.alpha / (self.alpha - 1.0) - self.shift

    def abs_mean(self) -> float:
        """``E|X|``; used for the Markov bound on truncated series."""
        mu = self.alpha / (self.alpha - 1.0)
        if self.shift == 0.0:
            return mu
        # E|Y - mu| = 2 E(Y - mu)^+ = 2 * int_mu^inf t^-alpha dt
        return 2.0 * mu ** (1.0 - self.alpha) / (self.alpha - 1.0)

    def centered(self) -> "CenteredPareto":
        return CenteredPareto(self.alpha)


@dataclass(frozen=True)
class Pareto(Distribution):
    """Pareto law on ``[1, inf)`` with ``P{X > x} = x**-alpha``."""


@dataclass(frozen=True)
class CenteredPareto(Distribution):
    """Pareto law shifted by its mean ``alpha / (alpha - 1)``; has mean zero."""

    @property
    def shift(self) -> float:
        return self.alpha / (self.alpha - 1.0)

    def mean(self) -> float:
        return 0.0


def make_distribution(name: str, alpha: float) -> Distribution:
    """Build a distribution from its configuration name (``pareto`` or ``centered_pareto``)."""
    kinds = {"pareto": Pareto, "centered_pareto": CenteredPareto}
    try:
        return kinds[name](float(alpha))
    except KeyError:
        raise ValueError(f"unknown distribution {name!r}; expected one of {sorted(kinds)}") from None
