import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate, stats

from tailsum.distributions import CenteredPareto, Pareto, make_distribution


class FixedUniform:
    """Stand-in generator returning a fixed value from ``random``."""

    def __init__(self, u):
        self.u = u

    def random(self, size=None):
        return np.full(size, self.u) if size is not None else self.u


@pytest.mark.parametrize("x, expected", [(1.0, 1.0), (0.5, 1.0), (2.0, 0.0625), (200.0, 6.25e-10)])
def test_pareto_tail_values(pareto4, x, expected):
    assert pareto4.tail(x) == pytest.approx(expected, rel=1e-14)


def test_centered_tail_is_shifted(centered4, pareto4):
    mu = 4.0 / 3.0
    for x in [-1.0, -1 / 3, 0.0, 0.5, 10.0, 1e5]:
        assert centered4.tail(x) == pytest.approx(pareto4.tail(x + mu), rel=1e-13)
    assert centered4.tail(-0.4) == 1.0


def test_tail_vectorised(pareto4):
    x = np.array([0.0, 1.0, 2.0, 4.0])
    np.testing.assert_allclose(pareto4.tail(x), [1.0, 1.0, 1 / 16, 1 / 256])


@pytest.mark.parametrize(
    "dist, u, expected",
    [(Pareto(4.0), 1.0, 1.0), (Pareto(4.0), 0.0625, 2.0), (CenteredPareto(4.0), 0.0625, 2 / 3)],
)
def test_inverse_transform(dist, u, expected):
    # sample() feeds 1 - rng.random() to the quantile map
    assert dist.sample(FixedUniform(1.0 - u)) == pytest.approx(expected, rel=1e-14)
    assert dist.quantile_upper(u) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("dist, expected", [(Pareto(4.0), 4 / 3), (CenteredPareto(4.0), 0.0), (Pareto(3.0), 1.5)])
def test_mean(dist, expected):
    assert dist.mean() == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("dist", [Pareto(4.0), Pareto(3.0), CenteredPareto(4.0), CenteredPareto(2.5)])
def test_mean_matches_quadrature(dist):
    # E X = low + int_low^inf tail(x) dx
    low = dist.support_low
    integral, _ = integrate.quad(dist.tail, low, np.inf, epsabs=1e-13)
    assert low + integral == pytest.approx(dist.mean(), abs=1e-10)


@pytest.mark.parametrize("dist", [Pareto(4.0), CenteredPareto(4.0), CenteredPareto(3.0)])
def test_abs_mean_matches_quadrature(dist):
    f = lambda x: abs(x) * dist.pdf(x)
    low = dist.support_low
    split = [low, 0.0, np.inf] if low < 0 else [low, np.inf]
    val = sum(integrate.quad(f, lo, hi, epsabs=1e-13)[0] for lo, hi in zip(split, split[1:]))
    assert dist.abs_mean() == pytest.approx(val, rel=1e-9)


def test_pdf_integrates_to_one(centered4):
    val, _ = integrate.quad(centered4.pdf, centered4.support_low, np.inf)
    assert val == pytest.approx(1.0, abs=1e-12)


def test_alpha_must_exceed_two():
    with pytest.raises(ValueError):
        Pareto(2.0)
    with pytest.raises(ValueError):
        CenteredPareto(1.5)
    with pytest.raises(ValueError):
        make_distribution("lognormal", 4.0)


@given(st.floats(2.05, 10.0), st.floats(-5.0, 1e6), st.floats(0.0, 1e3))
def test_tail_is_probability_and_monotone(alpha, x, dx):
    for dist in (Pareto(alpha), CenteredPareto(alpha)):
        t0, t1 = dist.tail(x), dist.tail(x + dx)
        assert 0.0 <= t1 <= t0 <= 1.0


@given(st.floats(2.05, 10.0), st.floats(1e-3, 1e4), st.floats(1e-6, 1.0))
def test_tail_strictly_decreasing_above_support(alpha, x, eps):
    dist = Pareto(alpha)
    x = dist.support_low + eps + x
    assert dist.tail(x + eps) < dist.tail(x)


@pytest.mark.parametrize("dist", [Pareto(4.0), CenteredPareto(4.0)])
def test_ks_against_tail(dist, rng):
    x = dist.sample(rng, 1_000_000)
    res = stats.kstest(x, dist.cdf)
    assert res.pvalue > 1e-3


def test_centered_sample_mean_is_zero(centered4, rng):
    x = centered4.sample(rng, 1_000_000)
    # Var X = alpha / ((alpha - 1)^2 (alpha - 2)) for Pareto(alpha)
    var = 4.0 / (9.0 * 2.0)
    assert abs(x.mean()) < 4 * np.sqrt(var / x.size)
