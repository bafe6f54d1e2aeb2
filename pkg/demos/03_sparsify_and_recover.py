"""
Edge classification, sparsification, and cycle recovery
=======================================================

Classify edges by their probability trajectories, thin the instance down to
candidate edges, and recover the optimal cycle by dynamic programming over
the survivors.  Also shows the equivalent command-line invocations.

Run:  python demos/03_sparsify_and_recover.py
"""

import tspfreq as tf
from tspfreq.classify import DROP, KEEP, sparsified_text

# This seed exhibits the clean textbook behavior; on many random draws one
# cycle edge shows an early violating step and the filters lose it (the
# bounds behind the filters hold on average, not per draw).
inst = tf.perturb(tf.gen_random(9, seed=12), seed=12)
exact = tf.ohc(inst)
print(f"instance: {inst}")
print(f"exact optimal cycle: {exact.order}  length {exact.length:.4f}")

# --- decline-law classification ---------------------------------------------
# A cycle edge never loses more than 2 p / (i (i-1)) probability per step;
# any larger drop marks an ordinary edge.
traj = tf.classify_by_decrement(inst, (4, 6), exhaustive=True)
dropped = [t for t in traj if t.verdict == DROP]
kept = [t.edge for t in traj if t.verdict == KEEP]
print(f"\ndecline law over sizes 4..6: dropped {len(dropped)} of {len(traj)} edges")
print(f"kept edges: {kept}")
print(f"kept == cycle edges: {set(kept) == exact.edges()}")

one = dropped[0]
print(f"example drop: edge {one.edge} fired at step {one.drop_step} ({one.drop_reason})")

# --- evaluation against a reference tour -------------------------------------
report = tf.evaluate_against_tour(traj, exact)
print("\nper-size class summary (i, F_tot, F_ohc, p_ohc%):")
for row in report.rows:
    print(f"  {row.i}  {row.F_tot}  {row.F_ohc}  {row.p_ohc_pct:.2f}")

# --- threshold sparsification -------------------------------------------------
sg = tf.classify_by_threshold(
    inst, i=6, N=0, threshold_rule=("kth_ohc", 1), tour=exact, exhaustive=True
)
print(f"\nfirst-smallest threshold at size 6 keeps {len(sg.kept_edges)} edges "
      f"({sg.provenance['kept_ohc']} cycle, {sg.provenance['kept_ordinary']} ordinary)")
print(sparsified_text(sg))

# --- recovery pipeline ----------------------------------------------------------
# Sample statistics at i_eval = min(2 i_d, n), keep edges with average label
# >= C(i_eval,2)/2, then run the cycle DP restricted to survivors.
pick = tf.perturb(tf.gen_random(10, seed=2), seed=2)
result = tf.recover_ohc(pick, tf.RecoveryConfig(seed=2))
print(f"n=10 recovery at i_eval={result.i_eval}: kept {len(result.graph.kept_edges)} edges, "
      f"recovered length {result.tour.length:.4f}")
print(f"recovered == exact: {result.tour.order == tf.ohc(pick).order}")

print("""
command-line equivalents:
  tspfreq sparsify --random 9,12 --perturb --seed 12 --mode decrement \\
      --i-range 4..6 --exhaustive --out OUT
  tspfreq solve --random 10,2 --perturb --seed 2 --out OUT
  tspfreq freqgraph --random 8,3 --perturb --seed 3 --out OUT
  tspfreq analytics --n 1000 --grid 1000,10000000,9 --out OUT
  tspfreq idsolve --n 1000 --residual-corrected
""")
