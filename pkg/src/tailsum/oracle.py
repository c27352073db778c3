"""Reference values for small instances.

* :func:`tail_s1` -- closed form for a single term.
* :func:`tail_sn_quadrature`, :func:`local_increment_quadrature` -- deterministic
  nested quadrature for two or three terms.
* :func:`tail_trunc_plain_mc` -- crude Monte Carlo on a truncated series.

The quadrature conditions on the value of the *largest* term ``a_j X_j`` and
integrates the remaining terms explicitly, which is a different route from the
conditional estimators it is used to check (those condition on every term
except the largest).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .coefficients import CoefficientSequence
from .distributions import Distribution

__all__ = [
    "OracleMethod",
    "OracleResult",
    "tail_s1",
    "joint_max_probability",
    "tail_sn_quadrature",
    "local_increment_quadrature",
    "tail_trunc_plain_mc",
    "truncation_remainder",
]

_EPSABS = 1e-13
_EPSREL = 1e-11
_LIMIT = 200


class OracleMethod(enum.Enum):
    CLOSED_FORM = "closed_form"
    QUADRATURE = "quadrature"
    PLAIN_MC = "plain_mc"


@dataclass(frozen=True)
class OracleResult:
    value: float
    method: OracleMethod
    error_bound: float
    truncation_remainder: float = 0.0
    degenerate: bool = False

    def __post_init__(self):
        if not self.error_bound >= 0:
            raise ValueError("error_bound must be non-negative")


def tail_s1(b: float, dist: Distribution, seq: CoefficientSequence) -> OracleResult:
    """``P{a_1 X_1 > b}``."""
    return OracleResult(float(dist.tail(b / seq.coeff(1))), OracleMethod.CLOSED_FORM, 0.0)


class _Scalar:
    """Plain-float tail and quantile of a power-tailed law (avoids numpy call overhead)."""

    def __init__(self, dist: Distribution):
        self.alpha = float(dist.alpha)
        self.shift = float(dist.shift)
        self.support_low = 1.0 - self.shift

    def tail(self, x):
        y = x + self.shift
        return 1.0 if y <= 1.0 else y ** -self.alpha

    def quantile_upper(self, u):
        return u ** (-1.0 / self.alpha) - self.shift


def _integrate_u(g, x_lo, x_hi, dist, kinks=()):
    """``int_{x_lo}^{x_hi} g(x) dF(x)`` through ``x = Q(u)``, ``u = P{X > x}``.

    The ``u`` interval is rescaled to [0, 1] so that tolerances are relative to
    its length.  Returns ``(value, abserr)``.
    """
    x_lo = max(x_lo, dist.support_low)
    if not x_hi > x_lo:
        return 0.0, 0.0
    u_lo = dist.tail(x_hi) if math.isfinite(x_hi) else 0.0
    u_hi = dist.tail(x_lo)
    width = u_hi - u_lo
    if width <= 0.0:
        return 0.0, 0.0
    pts = sorted(
        (dist.tail(k) - u_lo) / width for k in kinks if x_lo < k < x_hi
    )
    pts = [p for p in pts if 0.0 < p < 1.0]

    def h(t):
        u = u_lo + t * width
        if u <= 0.0:
            return 0.0
        return g(dist.quantile_upper(u))

    val, err = integrate.quad(
        h, 0.0, 1.0, points=pts or None, epsabs=_EPSABS, epsrel=_EPSREL, limit=_LIMIT
    )
    return width * val, width * err


def _band_prob(dist, a, lo, hi):
    """``P{lo < a X < hi}``."""
    if hi <= lo:
        return 0.0
    return max(0.0, dist.tail(lo / a) - dist.tail(hi / a))


def joint_max_probability(b: float, sum_idx, cap_idx, j: int,
                          dist: Distribution, seq: CoefficientSequence):
    """``P{sum_{i in sum_idx} a_i X_i > b,  a_i X_i < a_j X_j for i in cap_idx, i != j}``.

    Indices are 1-based, ``j`` must belong to ``cap_idx`` and ``sum_idx`` must be
    a subset of ``cap_idx``; at most two summands other than ``j`` are supported.
    Returns ``(value, abserr)``.
    """
    sum_idx, cap_idx = sorted(set(sum_idx)), sorted(set(cap_idx))
    if j not in cap_idx or not set(sum_idx) <= set(cap_idx):
        raise ValueError("need j in cap_idx and sum_idx within cap_idx")
    others = [i for i in sum_idx if i != j]
    capped_only = [i for i in cap_idx if i not in sum_idx and i != j]
    if len(others) > 2:
        raise ValueError("quadrature oracle supports at most three terms")
    dist = _Scalar(dist)
    a = {i: float(seq.coeff(i)) for i in cap_idx}
    aj = a[j]
    low = dist.support_low
    in_sum = j in sum_idx
    count = len(sum_idx)
    if count == 0:
        return 0.0, 0.0

    inner_err = [0.0]

    def conditional(x):
        m = aj * x
        c = b - m if in_sum else b
        factor = 1.0
        for i in capped_only:
            factor *= 1.0 - dist.tail(m / a[i])
        if factor == 0.0:
            return 0.0
        if not others:
            return factor if c < 0.0 else 0.0
        if len(others) == 1:
            return factor * _band_prob(dist, a[others[0]], c, m)
        i, k = others
        # integrate over X_i with a_i X_i < m; X_k must fall in (c - a_i x_i, m)
        lo_i = (c - m) / a[i]
        hi_i = m / a[i]
        kink = (c - a[k] * low) / a[i]
        val, err = _integrate_u(
            lambda y: _band_prob(dist, a[k], c - a[i] * y, m), lo_i, hi_i, dist, (kink,)
        )
        inner_err[0] = max(inner_err[0], err)
        return factor * val

    # all capped terms are below m and the sum exceeds b, so m > b / count
    x_start = b / (count * aj)
    kinks = {b / aj, b / (2 * aj), b / (3 * aj)}
    for i in cap_idx:
        if i == j:
            continue
        kinks.add(a[i] * low / aj)
        kinks.add((b - a[i] * low) / aj)
        kinks.add((b - a[i] * low) / (2 * aj))
        for k in others:
            if k != i:
                kinks.add((b - (a[i] + a[k]) * low) / aj)
    val, err = _integrate_u(conditional, x_start, np.inf, dist, sorted(kinks))
    return val, err + inner_err[0]


def _check_quadrature_inputs(n, dist):
    if n not in (1, 2, 3):
        raise ValueError("quadrature oracle supports n in {1, 2, 3}")
    if not isinstance(dist, Distribution):
        raise ValueError("quadrature oracle needs a power-tailed Distribution with closed-form density")


def _tolerance(value, err):
    return float(err + _EPSABS + 1e-10 * abs(value))


def tail_sn_quadrature(n: int, b: float, dist: Distribution,
                       seq: CoefficientSequence) -> OracleResult:
    """``P{S_n > b}`` for ``n <= 3`` by nested quadrature."""
    _check_quadrature_inputs(n, dist)
    idx = range(1, n + 1)
    total, err = 0.0, 0.0
    for j in idx:
        v, e = joint_max_probability(b, idx, idx, j, dist, seq)
        total += v
        err += e
    return OracleResult(total, OracleMethod.QUADRATURE, _tolerance(total, err))


def local_increment_quadrature(n: int, b: float, dist: Distribution, seq: CoefficientSequence):
    """The split of ``P{S_n > b} - P{S_{n-1} > b}`` by the position of the maximum.

    Returns ``(p1, p2)``: the parts where the ``n``-th term is, respectively
    is not, the largest of the first ``n`` terms.
    """
    _check_quadrature_inputs(n, dist)
    if n == 1:
        return tail_s1(b, dist, seq), OracleResult(0.0, OracleMethod.CLOSED_FORM, 0.0)
    full, prev = range(1, n + 1), range(1, n)

    def part(j):
        v1, e1 = joint_max_probability(b, full, full, j, dist, seq)
        v2, e2 = joint_max_probability(b, prev, full, j, dist, seq)
        return v1 - v2, e1 + e2

    p1, e1 = part(n)
    p2, e2 = 0.0, 0.0
    for j in range(1, n):
        v, e = part(j)
        p2 += v
        e2 += e
    return (
        OracleResult(p1, OracleMethod.QUADRATURE, _tolerance(p1, e1)),
        OracleResult(p2, OracleMethod.QUADRATURE, _tolerance(p2, e2)),
    )


def truncation_remainder(m: int, dist: Distribution, seq: CoefficientSequence) -> float:
    """Markov-type bound ``E|sum_{i>m} a_i X_i| <= E|X| * sum_{i>m} a_i``."""
    return dist.abs_mean() * float(seq.power_tail(1.0, m))


def tail_trunc_plain_mc(m: int, b: float, dist: Distribution, seq: CoefficientSequence,
                        replications: int, seed: int, *, chunk: int = 8192) -> OracleResult:
    """Crude Monte Carlo estimate of ``P{S_m > b}`` with a 4-standard-error bound.

    Chunk ``k`` uses ``SeedSequence(seed, spawn_key=(0, k))``.  With a single
    replication the bound is infinite and the result is flagged degenerate.
    """
    a = seq.head(m)
    hits, done, k = 0, 0, 0
    while done < replications:
        size = min(chunk, replications - done)
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0, k)))
        hits += int(np.count_nonzero(dist.sample(rng, (size, m)) @ a > b))
        done += size
        k += 1
    p = hits / replications
    remainder = truncation_remainder(m, dist, seq)
    if replications < 2:
        return OracleResult(p, OracleMethod.PLAIN_MC, float("inf"), remainder, degenerate=True)
    se = np.sqrt(p * (1.0 - p) / (replications - 1))
    return OracleResult(p, OracleMethod.PLAIN_MC, float(4.0 * se), remainder)
