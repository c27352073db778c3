"""Reducing a general problem to centred increments with a_1 < 1.

An uncentred sum S = sum a_n X_n exceeds b exactly when the centred sum
sum (a_n / a_1) (X_n - mu) exceeds (b - mu sum a_n) / a_1.  Both forms target
the same probability; this script estimates it both ways.
"""

from tailsum import Geometric, Pareto, Proposed, normalize_problem, run

dist, seq, b = Pareto(4.0), Geometric(0.9), 200.0
new_seq, new_dist, new_b = normalize_problem(seq, dist, b)
print(f"original:   {type(dist).__name__}, a_1={seq.coeff(1):.3f}, b={b:g}")
print(f"normalised: {type(new_dist).__name__}, a_1={new_seq.coeff(1):.3f}, b={new_b:.4f}")

for label, (d, s, bb) in (("original", (dist, seq, b)), ("normalised", (new_dist, new_seq, new_b))):
    st = run(Proposed(), bb, 1.0, d, s, 40_000, seed=5)
    print(f"{label:10s} estimate={st.mean:.4e} +- {st.std_error:.1e}  CV={st.cv:.2f}")
