"""The law of the random truncation level N.

Shows p_n for the first few levels, the exact mean E[N] and a sampled mean.
E[N] barely moves with b, so the expected work per replication stays bounded.
"""

import numpy as np

from tailsum import Geometric, OuterLaw

seq = Geometric(0.9)
rng = np.random.default_rng(2)
for b in (200.0, 1000.0, 1e5):
    law = OuterLaw(b, seq, alpha=4.0, r=1.0)
    levels = law.sample_level(rng, 200_000)
    head = ", ".join(f"{p:.4f}" for p in law.pmf(np.arange(1, 6)))
    print(f"b={b:8g}  c_b={law.c_b:.6f}  p_1..5=[{head}]  "
          f"E[N]={law.mean():.4f}  sampled={levels.mean():.4f}  max={levels.max()}")
