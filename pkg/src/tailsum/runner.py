"""Replication engine, baselines and summary statistics.

Replications are grouped into fixed-size blocks.  Block ``k`` of stream ``s``
draws from ``SeedSequence(seed, spawn_key=(s, k))``, so the values produced
do not depend on how blocks are scheduled over threads.  Per-block moments
are merged pairwise in block order, which makes the reported statistics
bit-identical for any thread count.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .coefficients import CoefficientSequence
from .distributions import Distribution
from .outer_randomizer import OuterLaw, estimate_batch

__all__ = [
    "Moments",
    "RunStats",
    "Proposed",
    "NaiveDebiased",
    "CrudeTruncated",
    "EstimatorChoice",
    "make_estimator",
    "block_stream",
    "simulate",
    "run",
    "sweep",
    "asymptotic",
]

DEFAULT_BLOCK = 2048


@dataclass(frozen=True)
class Moments:
    """Count, mean and centred sum of squares of a sample; mergeable."""

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0

    @classmethod
    def of(cls, values) -> "Moments":
        values = np.asarray(values, dtype=float)
        if values.size == 0:
            return cls()
        mean = float(np.mean(values))
        return cls(values.size, mean, float(np.sum((values - mean) ** 2)))

    def merge(self, other: "Moments") -> "Moments":
        if other.count == 0:
            return self
        if self.count == 0:
            return other
        n = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * (other.count / n)
        m2 = self.m2 + other.m2 + delta * delta * (self.count * other.count / n)
        return Moments(n, mean, m2)

    @classmethod
    def combine(cls, parts) -> "Moments":
        """Pairwise reduction in the given order."""
        parts = list(parts)
        if not parts:
            return cls()
        while len(parts) > 1:
            merged = [parts[i].merge(parts[i + 1]) for i in range(0, len(parts) - 1, 2)]
            if len(parts) % 2:
                merged.append(parts[-1])
            parts = merged
        return parts[0]

    @property
    def variance(self) -> float:
        return self.m2 / (self.count - 1) if self.count > 1 else float("nan")


@dataclass(frozen=True)
class RunStats:
    replications: int
    mean: float
    std_error: float
    cv: float
    mean_n: float
    total_work: int
    wall_seconds: float

    @property
    def std(self) -> float:
        return self.std_error * np.sqrt(self.replications)


@dataclass(frozen=True)
class Proposed:
    """Randomised level with conditional local estimators."""

    name = "proposed"

    def simulate_block(self, b, r, dist, seq, rng, size):
        law = OuterLaw(b, seq, dist.alpha, r)
        return estimate_batch(law, dist, seq, rng, size)


@dataclass(frozen=True)
class NaiveDebiased:
    """Randomised level with ``1{S_N > b} - 1{S_{N-1} > b}`` as the local term."""

    name = "naive_debiased"

    def simulate_block(self, b, r, dist, seq, rng, size):
        law = OuterLaw(b, seq, dist.alpha, r)
        levels = np.atleast_1d(law.sample_level(rng, size))
        z = np.empty(size)
        for n in np.unique(levels):
            mask = levels == n
            a = seq.head(int(n))
            terms = dist.sample(rng, (int(mask.sum()), int(n))) * a
            s_n = terms.sum(axis=1)
            s_prev = s_n - terms[:, -1]
            z[mask] = ((s_n > b).astype(float) - (s_prev > b)) / law.pmf(int(n))
        return z, levels, levels.copy()


@dataclass(frozen=True)
class CrudeTruncated:
    """Plain Monte Carlo on the first ``m`` terms; biased by the truncation."""

    m: int
    name = "crude"

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("truncation level m must be >= 1")

    def simulate_block(self, b, r, dist, seq, rng, size):
        a = seq.head(self.m)
        s = dist.sample(rng, (size, self.m)) @ a
        levels = np.full(size, self.m)
        return (s > b).astype(float), levels, levels.copy()


EstimatorChoice = Proposed | NaiveDebiased | CrudeTruncated


def make_estimator(name: str, m: int | None = None) -> EstimatorChoice:
    if name == "proposed":
        return Proposed()
    if name == "naive_debiased":
        return NaiveDebiased()
    if name == "crude":
        if m is None:
            raise ValueError("crude estimator needs a truncation level m")
        return CrudeTruncated(int(m))
    raise ValueError(f"unknown estimator {name!r}")


def block_stream(seed: int, stream: int, block: int) -> np.random.Generator:
    """Generator for one block; depends only on ``(seed, stream, block)``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream, block)))


def _blocks(replications, block_size):
    full, rest = divmod(replications, block_size)
    return [block_size] * full + ([rest] if rest else [])


def _map_blocks(fn, sizes, threads):
    if threads <= 1 or len(sizes) <= 1:
        return [fn(k, size) for k, size in enumerate(sizes)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(len(sizes)), sizes))


def simulate(choice: EstimatorChoice, b: float, r: float, dist: Distribution,
             seq: CoefficientSequence, replications: int, seed: int, *,
             stream: int = 0, threads: int = 1, block_size: int = DEFAULT_BLOCK):
    """All individual replications as arrays ``(z, levels, work)``."""

    def one(k, size):
        return choice.simulate_block(b, r, dist, seq, block_stream(seed, stream, k), size)

    parts = _map_blocks(one, _blocks(replications, block_size), threads)
    return tuple(np.concatenate(p) for p in zip(*parts))


def run(choice: EstimatorChoice, b: float, r: float, dist: Distribution,
        seq: CoefficientSequence, replications: int, seed: int, *,
        stream: int = 0, threads: int = 1, block_size: int = DEFAULT_BLOCK) -> RunStats:
    """Estimate ``P{S > b}`` from ``replications`` independent draws of ``choice``.

    ``total_work`` counts increment draws plus one draw of the level per
    replication.
    """
    if replications < 2:
        raise ValueError("replications must be >= 2")
    start = time.perf_counter()

    def one(k, size):
        z, levels, work = choice.simulate_block(
            b, r, dist, seq, block_stream(seed, stream, k), size
        )
        return Moments.of(z), int(levels.sum()), int(work.sum()) + size

    parts = _map_blocks(one, _blocks(replications, block_size), threads)
    moments = Moments.combine(p[0] for p in parts)
    std = float(np.sqrt(moments.variance))
    return RunStats(
        replications=replications,
        mean=moments.mean,
        std_error=std / float(np.sqrt(replications)),
        cv=std / moments.mean if moments.mean != 0 else float("inf"),
        mean_n=sum(p[1] for p in parts) / replications,
        total_work=sum(p[2] for p in parts),
        wall_seconds=time.perf_counter() - start,
    )


def sweep(choice: EstimatorChoice, b_list, r: float, dist: Distribution,
          seq: CoefficientSequence, replications: int, seed: int, *,
          threads: int = 1, block_size: int = DEFAULT_BLOCK) -> list[RunStats]:
    """One :func:`run` per threshold; threshold ``i`` uses stream ``i``."""
    b_list = list(b_list)
    if not b_list:
        raise ValueError("b_list must not be empty")
    return [
        run(choice, b, r, dist, seq, replications, seed,
            stream=i, threads=threads, block_size=block_size)
        for i, b in enumerate(b_list)
    ]


def asymptotic(b: float, dist: Distribution, seq: CoefficientSequence) -> float:
    """Single-big-jump approximation ``P{X > b} * sum a_n**alpha``."""
    return float(dist.tail(b)) * seq.sum_a_alpha(dist.alpha)
