"""Relative error of three estimators at increasingly rare thresholds.

* proposed: randomised level with conditional local estimators
* naive_debiased: randomised level with raw indicator differences
* crude: plain Monte Carlo on the first 100 terms

The crude estimator needs on the order of 1 / P{S > b} draws to see a single
hit, so its CV explodes; the proposed estimator keeps a bounded CV.
"""

from tailsum import CenteredPareto, CrudeTruncated, Geometric, NaiveDebiased, Proposed, run

dist, seq = CenteredPareto(4.0), Geometric(0.9)
reps = 20_000

for b in (5.0, 20.0, 100.0):
    print(f"b = {b:g}")
    for choice in (Proposed(), NaiveDebiased(), CrudeTruncated(100)):
        st = run(choice, b, 1.5, dist, seq, reps, seed=3)
        print(f"  {choice.name:15s} estimate={st.mean:.3e}  CV={st.cv:8.2f}  "
              f"work/rep={st.total_work / reps:6.1f}  {st.wall_seconds:.2f}s")
