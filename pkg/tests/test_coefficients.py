import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from tailsum.coefficients import (
    Geometric,
    KappaClass,
    Polynomial,
    make_sequence,
    normalize_problem,
)
from tailsum.distributions import CenteredPareto, Pareto
from tailsum.oracle import tail_sn_quadrature


def brute_sum(terms_fn, p, power_of_n=0, n_terms=10_000, s=None):
    """Partial sum of n**power_of_n * a_n**p plus an integral bound on the remainder.

    For the polynomial family the remainder of sum_{k>N} k**q c**p k**(-s p)
    lies between the integrals from N+1 and from N; the midpoint is returned.
    """
    n = np.arange(1, n_terms + 1, dtype=float)
    head = math.fsum(n**power_of_n * terms_fn(n) ** p)
    if s is None:
        return head
    e = s * p - power_of_n
    c_p = terms_fn(1.0) ** p
    upper = c_p * n_terms ** (1 - e) / (e - 1)
    lower = c_p * (n_terms + 1) ** (1 - e) / (e - 1)
    return head + 0.5 * (upper + lower)


@pytest.mark.parametrize("n, expected", [(1, 0.9), (2, 0.81)])
def test_geometric_coeff(geo09, n, expected):
    assert geo09.coeff(n) == pytest.approx(expected, rel=1e-15)


def test_polynomial_coeff():
    assert Polynomial(0.5, 3.0).coeff(2) == pytest.approx(0.0625, rel=1e-15)


def test_index_zero_rejected(geo09):
    with pytest.raises(ValueError):
        geo09.coeff(0)


def test_geometric_sums(geo09):
    assert geo09.sum_a() == pytest.approx(9.0, rel=1e-14)
    assert geo09.sum_n_a() == pytest.approx(90.0, rel=1e-14)
    assert geo09.sum_a_alpha(4.0) == pytest.approx(0.6561 / 0.3439, rel=1e-14)
    assert geo09.sum_a_alpha(4.0) == pytest.approx(1.907822, rel=1e-6)


def test_geometric_power_sum_identity(geo09):
    for alpha in [2.5, 4.0, 7.3]:
        q = 0.9**alpha
        assert geo09.sum_a_alpha(alpha) * (1 - q) == pytest.approx(q, rel=1e-14)


@pytest.mark.parametrize("seq", [Geometric(0.9), Geometric(0.5), Geometric(0.3, scale=2.0)])
def test_geometric_sums_match_brute_force(seq):
    f = seq.coeff
    assert seq.sum_a() == pytest.approx(brute_sum(f, 1.0, n_terms=2000), rel=1e-13)
    assert seq.sum_n_a() == pytest.approx(brute_sum(f, 1.0, 1, n_terms=2000), rel=1e-13)
    assert seq.sum_a_alpha(4.0) == pytest.approx(brute_sum(f, 4.0, n_terms=2000), rel=1e-13)
    assert seq.sum_n_a_alpha(4.0) == pytest.approx(brute_sum(f, 4.0, 1, n_terms=2000), rel=1e-13)


@pytest.mark.parametrize("seq", [Polynomial(0.5, 3.0), Polynomial(0.9, 2.2), Polynomial(1.0, 4.0)])
def test_polynomial_sums_within_certified_tolerance(seq):
    f = seq.coeff
    s = seq.s
    assert seq.sum_a() == pytest.approx(brute_sum(f, 1.0, s=s), rel=1e-12)
    assert seq.sum_n_a() == pytest.approx(brute_sum(f, 1.0, 1, s=s), rel=1e-8)
    assert seq.sum_a_alpha(4.0) == pytest.approx(brute_sum(f, 4.0, s=s), rel=1e-12)
    assert seq.sum_n_a_alpha(4.0) == pytest.approx(brute_sum(f, 4.0, 1, s=s), rel=1e-12)


@pytest.mark.parametrize("seq", [Geometric(0.9), Polynomial(0.5, 3.0)])
def test_power_tail_consistent_with_head(seq):
    for m in [0, 1, 5, 37]:
        head = seq.head(m).sum() if m else 0.0
        assert head + seq.power_tail(1.0, m) == pytest.approx(seq.sum_a(), rel=1e-13)


def test_polynomial_requires_summable_moment():
    with pytest.raises(ValueError):
        Polynomial(0.5, 2.0)
    with pytest.raises(ValueError):
        Geometric(1.0)
    with pytest.raises(ValueError):
        make_sequence("harmonic", 1.0)


@pytest.mark.parametrize(
    "seq, expected",
    [
        (Geometric(0.9), KappaClass.INFINITE),
        (Polynomial(0.5, 3.0), KappaClass.FINITE),
        (Geometric(0.5), KappaClass.INFINITE),
    ],
)
def test_kappa_class(seq, expected):
    assert seq.kappa_class() is expected


@given(st.floats(0.01, 0.99), st.integers(1, 200))
def test_geometric_decreasing_in_unit_interval(rho, n):
    assume((n + 1) * math.log(rho) > -700)  # stay clear of float underflow
    seq = Geometric(rho)
    assert 0 < seq.coeff(n + 1) < seq.coeff(n) < 1


def test_normalize_identity_when_standard(geo09, centered4):
    assert normalize_problem(geo09, centered4, 200.0) == (geo09, centered4, 200.0)


def test_normalize_table_example(geo09, pareto4):
    seq, dist, b = normalize_problem(geo09, pareto4, 200.0)
    assert isinstance(dist, CenteredPareto) and dist.alpha == 4.0
    assert b == pytest.approx((200 - 9 * 4 / 3) / 0.9, rel=1e-14)
    assert b == pytest.approx(208.8888888, rel=1e-8)
    np.testing.assert_allclose(seq.head(5), 0.9 ** np.arange(1, 6) / 0.9, rtol=1e-14)


def test_normalize_pure_rescaling(centered4):
    seq = Polynomial(2.0, 3.0)
    new_seq, dist, b = normalize_problem(seq, centered4, 10.0)
    assert dist is centered4
    assert b == pytest.approx(5.0)
    np.testing.assert_allclose(new_seq.head(4), seq.head(4) / 2)


def test_normalize_rejects_nonpositive_threshold(geo09, pareto4):
    with pytest.raises(ValueError):
        normalize_problem(geo09, pareto4, 12.0)


@pytest.mark.parametrize("n, b", [(2, 3.0), (2, 6.0), (3, 5.0)])
def test_normalize_preserves_estimand(pareto4, n, b):
    seq = Geometric(0.9)
    new_seq, new_dist, _ = normalize_problem(seq, pareto4, 100.0)
    # for a finite sum only the first n weights enter the mean shift
    shift = seq.head(n).sum() * pareto4.mean()
    expected = tail_sn_quadrature(n, b, pareto4, seq)
    got = tail_sn_quadrature(n, (b - shift) / seq.sup(), new_dist, new_seq)
    assert got.value == pytest.approx(expected.value, abs=expected.error_bound + got.error_bound)
