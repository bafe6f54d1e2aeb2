"""
Analytic bounds, the decline threshold, and the model curves
============================================================

Closed-form bounds on frequency labels, the exact integer solver for the
decline threshold i_d, the extreme-model probability curve with its forward
differences, and the coverage-count crossings.

Run:  python demos/02_bounds_and_decline.py
"""

import tspfreq as tf
from tspfreq import analytics

n = 1000

# --- closed-form bounds at one (n, i) ---------------------------------------
b = tf.bounds(n, 9)
print(f"bounds at n={n}, i=9:")
print(f"  cycle-edge floor (worst average case)  f_lb      = {b.f_lb}")
print(f"  worst-case variant                     f_lb_worst= {b.f_lb_worst:.3f}")
print(f"  expected cycle-edge floor              f_oavg    = {b.f_oavg}")
print(f"  ordinary ceiling / average ceiling     = {b.ord_ub} / {b.ord_avg_ub}")
print(f"  adjacent-pair floors 4/5, 3/4, 7/10    = {b.pair_lb}, {b.pair_lb_mid}, {b.pair_lb_worst}")
print(f"  peak position P0                       = {b.p0}")
print(f"  coverage fraction eps, r = 2e - e^2    = {b.epsilon:.3e}, {b.r:.3e}")
print(f"  coverage partition J, K, L sums to C(n-2, i-2): "
      f"{b.J + b.K + b.L == b.n_subgraphs}")

# --- the decline threshold ---------------------------------------------------
# Smallest i where the ordinary-edge probability must start falling; solved
# by exact integer cross-multiplication.  The residual-corrected variant
# accounts for a negative term dropped in the derivation.
for m in (100, 1000, 10000):
    print(f"\ni_d({m}) = {tf.solve_id(m)}   "
          f"residual-corrected: {tf.solve_id(m, residual_corrected=True)}   "
          f"4*m^(4/7) = {4 * m ** (4 / 7):.0f}")

# --- the extreme-model curve -------------------------------------------------
model = tf.pd_model(n)
print(f"\nextreme model at n={n}:")
print(f"  probability peaks at i = {model.peak_i} (value {model.p_at(model.peak_i):.6f})")
print(f"  decrement peaks at i = {model.pd_turn_i}")
print(f"  mean decrement over [33, 589]  = {model.mean_pd(33, 589):.6f}")
print(f"  mean decrement over [590, 999] = {model.mean_pd(590, 999):.6f}")
print(f"  cumulative drop from the peak passes 1/2 at i = {model.first_cum_drop_over_half}")
print(f"  first size with p <= 1/2 is i = {model.first_p_at_most_half}")

# --- one consecutive step, classified ---------------------------------------
d = tf.decrement_law(0.6, 0.5, 6)
print(f"\nstep 6 -> 7 with p 0.6 -> 0.5: pd={d.pd:.3f} err={d.err:.3f} "
      f"(positive err marks an ordinary edge)")

# --- coverage crossings -------------------------------------------------------
cov = tf.coverage_fractions(n)
print(f"\ncoverage counts at n={n}:")
print(f"  both-pairs count overtakes untouched count at i = {cov.first_k_over_j} "
      f"(analytic estimate {cov.approx_k_over_j})")
print(f"  single-pair count passes untouched count at i = {cov.first_l_over_j} "
      f"(analytic estimate {cov.approx_l_over_j})")
print(f"  both-pairs share reaches 1/2 at i = {cov.first_r_at_least_half}")
print(f"  decimal constants recomputed from closed forms agree to 1e-4: "
      f"{cov.constants_agree}")

thr = tf.sparsify_threshold(n)
print(f"\nextreme-model ordinary average sinks below C(i,2)/2 past i = {thr.index}; "
      f"2*i_d = {thr.two_i_d} reported side by side")
