"""Self-checks of the estimator against the reference values in :mod:`tailsum.oracle`."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from .coefficients import CoefficientSequence
from .distributions import Distribution
from .local_estimator import estimator1, estimator2
from .oracle import local_increment_quadrature, tail_sn_quadrature, tail_trunc_plain_mc
from .outer_randomizer import OuterLaw
from .runner import Proposed, block_stream, run

__all__ = ["CheckResult", "level_goodness_of_fit", "run_checks"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


def level_goodness_of_fit(levels, pmf, nbins: int = 30):
    """Chi-square test of sampled levels against ``pmf(n)`` on ``1..nbins`` plus a tail bin.

    Cells with expected count below 5 are folded into the tail bin.

    Returns
    -------
    statistic, p_value : float
    """
    levels = np.asarray(levels)
    total = levels.size
    probs = np.asarray(pmf(np.arange(1, nbins + 1)), dtype=float)
    expected = probs * total
    keep = int(np.argmax(expected < 5)) if np.any(expected < 5) else nbins
    counts = np.bincount(np.minimum(levels, keep + 1), minlength=keep + 2)[1:keep + 2]
    expected = np.append(expected[:keep], total - expected[:keep].sum())
    res = stats.chisquare(counts, expected)
    return float(res.statistic), float(res.pvalue)


def _within(estimate, reference, tolerance):
    return abs(estimate - reference) <= tolerance


def check_local_unbiasedness(dist, seq, seed, samples=100_000,
                             levels=(2, 3), thresholds=(2.0, 5.0, 10.0)):
    out = []
    for n in levels:
        for b in thresholds:
            p1, p2 = local_increment_quadrature(n, b, dist, seq)
            rng = block_stream(seed, 1000 + n, int(b * 1000))
            for label, est, ref in (("z1", estimator1, p1), ("z2", estimator2, p2)):
                z, _ = est(n, b, dist, seq, rng, samples)
                se = float(np.std(z, ddof=1) / np.sqrt(samples))
                tol = 4 * se + ref.error_bound
                out.append(CheckResult(
                    f"{label} unbiased n={n} b={b:g}",
                    _within(float(np.mean(z)), ref.value, tol),
                    f"mean={np.mean(z):.6e} oracle={ref.value:.6e} tol={tol:.2e}",
                ))
    return out


def check_outer_law(law: OuterLaw, seed, samples=1_000_000, corrupt_pmf=False):
    rng = block_stream(seed, 2000, 0)
    levels = np.asarray(law.sample_level(rng, samples))
    pmf = law.pmf
    if corrupt_pmf:
        def pmf(n):
            # swap mass between adjacent levels: deliberately wrong reference law
            n = np.asarray(n)
            return law.pmf(np.where(n % 2 == 1, n + 1, n - 1))
    stat, p = level_goodness_of_fit(levels, pmf)
    mean = law.mean()
    se = float(np.std(levels, ddof=1) / np.sqrt(samples))
    return [
        CheckResult("level law chi-square", p > 1e-3, f"stat={stat:.2f} p={p:.3g}"),
        CheckResult(
            "level mean", _within(float(levels.mean()), mean, 3 * se),
            f"empirical={levels.mean():.5f} exact={mean:.5f} tol={3 * se:.2e}",
        ),
    ]


def check_pmf_normalization(law: OuterLaw, upto=10_000):
    n = np.arange(1, upto + 1)
    err = abs(float(np.sum(law.pmf(n))) + float(law.sf(upto)) - 1.0)
    return CheckResult("pmf normalisation", err < 1e-10, f"|sum - 1| = {err:.2e}")


def check_unbiased_total(dist, seq, r, seed, b=5.0, samples=200_000, m=200):
    est = run(Proposed(), b, r, dist, seq, samples, seed, stream=3000)
    ref = tail_trunc_plain_mc(m, b, dist, seq, samples, seed + 1)
    tol = 4 * np.hypot(est.std_error, ref.error_bound / 4) + ref.truncation_remainder
    return CheckResult(
        f"Z(b) unbiased b={b:g}",
        _within(est.mean, ref.value, tol),
        f"estimate={est.mean:.6e} plain_mc={ref.value:.6e} tol={tol:.2e}",
    )


def check_single_big_jump(dist, seq, b=1e6):
    value = tail_sn_quadrature(2, b, dist, seq).value
    ratio = value / (float(dist.tail(b)) * float(np.sum(seq.head(2) ** dist.alpha)))
    return CheckResult("single big jump", 0.99 <= ratio <= 1.01, f"ratio={ratio:.6f}")


def run_checks(dist: Distribution, seq: CoefficientSequence, b: float, r: float,
               seed: int, corrupt_pmf: bool = False) -> list[CheckResult]:
    """All self-checks for one configuration; ``b`` drives the level-law checks."""
    law = OuterLaw(b, seq, dist.alpha, r)
    results = check_local_unbiasedness(dist, seq, seed)
    results += check_outer_law(law, seed, corrupt_pmf=corrupt_pmf)
    results.append(check_pmf_normalization(law))
    # for uncentred Pareto weights S > 5 surely; b = 20 is a non-degenerate case
    results.append(check_unbiased_total(dist, seq, r, seed, b=5.0))
    results.append(check_unbiased_total(dist, seq, r, seed, b=20.0))
    results.append(check_single_big_jump(dist, seq))
    return results
