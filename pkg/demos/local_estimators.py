"""The two conditional local estimators against deterministic quadrature.

For a fixed level n the pair (z1, z2) estimates the increment
P{S_n > b} - P{S_{n-1} > b}, split by whether the n-th term is the largest.
"""

import numpy as np

from tailsum import CenteredPareto, Geometric
from tailsum.local_estimator import estimator1, estimator2
from tailsum.oracle import local_increment_quadrature

dist, seq = CenteredPareto(4.0), Geometric(0.9)
rng = np.random.default_rng(1)
samples = 100_000

for n in (2, 3):
    for b in (2.0, 5.0, 10.0):
        p1, p2 = local_increment_quadrature(n, b, dist, seq)
        z1, _ = estimator1(n, b, dist, seq, rng, samples)
        z2, _ = estimator2(n, b, dist, seq, rng, samples)
        for name, z, ref in (("z1", z1, p1), ("z2", z2, p2)):
            se = z.std(ddof=1) / np.sqrt(samples)
            print(f"n={n} b={b:4g} {name}: mc={z.mean():.5e} +- {se:.1e}   "
                  f"quadrature={ref.value:.5e}   ({(z.mean() - ref.value) / se:+.2f} SE)")
