"""Estimate P{S > b} for S = sum 0.9**n X_n with Pareto(4) increments.

Prints the threshold, the single-big-jump approximation and the unbiased
estimate with its standard error and coefficient of variation.  The CV stays
of order one as b grows, while the target shrinks by three orders of magnitude.

    python3 demos/reproduce_table.py [replications]
"""

import sys

from tailsum import Geometric, Pareto, Proposed, asymptotic, sweep

reps = int(sys.argv[1]) if len(sys.argv) > 1 else 10_000
dist, seq = Pareto(4.0), Geometric(0.9)
b_values = [200.0, 500.0, 1000.0]

stats = sweep(Proposed(), b_values, 1.0, dist, seq, reps, seed=20170101)
print(f"{'b':>6}  {'asymptotic':>10}  {'estimate':>10}  {'std error':>10}  {'CV':>5}  {'E[N]':>5}")
for b, st in zip(b_values, stats):
    print(f"{b:6g}  {asymptotic(b, dist, seq):10.3e}  {st.mean:10.3e}  "
          f"{st.std_error:10.2e}  {st.cv:5.2f}  {st.mean_n:5.2f}")
