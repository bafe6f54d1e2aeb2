"""
Frequency subgraphs from optimal fixed-endpoint paths
=====================================================

A walk through the core objects: optimal fixed-endpoint paths on vertex
subsets, the frequency subgraph their counts induce, the four-vertex closed
form, and the counting identities every frequency subgraph obeys.

Run:  python demos/01_frequency_subgraphs.py
"""

import math

import tspfreq as tf

# A perturbed random instance: 9 vertices, uniform distances in (0, 10],
# plus tiny additive noise so every optimum is unique.
inst = tf.perturb(tf.gen_random(9, seed=7), seed=7)
print(f"instance: {inst}")

# --- optimal fixed-endpoint paths -----------------------------------------
# For a chosen subset and endpoint pair, op_path returns the shortest
# Hamiltonian path on the subset with those endpoints.
sel = tf.select(inst, [0, 2, 3, 5, 8])
p = tf.op_path(inst, sel, 0, 8)
print(f"\noptimal path 0..8 on {sel.vertices}: {p.order}  length {p.length:.3f}")

# The full family: one optimal path per endpoint pair, C(5,2) = 10 of them.
paths = tf.all_op_paths(inst, sel)
print(f"family size: {len(paths)} (= C(5,2))")

# Against brute force, for the skeptical:
oracle = tf.oracle_path(inst, sel, 0, 8)
assert oracle.order == p.order and oracle.length == p.length
print("matches exhaustive enumeration: yes")

# --- the frequency subgraph ------------------------------------------------
# Label each edge of the subset with the number of optimal paths containing
# it.  Three identities hold by construction:
fg = tf.frequency_graph(inst, sel)
i = fg.i
print(f"\nfrequency labels: {fg.freq}")
print(f"total {fg.total()} == C(i,2)*(i-1) == {math.comb(i, 2) * (i - 1)}")
print(f"average label {fg.average()} == i-1 == {i - 1}")
for w in sel.vertices:
    assert fg.vertex_total(w) == (i - 1) ** 2
print(f"every vertex's incident labels sum to (i-1)^2 = {(i - 1) ** 2}")

# Edges used by no optimal path drop out of the support graph; the support
# always keeps vertex degree >= 3.
support = tf.support_graph(fg)
print(f"support: {len(support.edges)} edges, min degree {support.min_degree}")

# --- the four-vertex closed form -------------------------------------------
# For 4 vertices the family is determined by ordering three pairing sums:
# the two edges of the smallest pairing appear in 5 of the 6 paths, the
# middle pairing in 3, the largest in 1.
quartet = tf.select(inst, [1, 4, 6, 7])
closed = tf.freq_k4_closed(inst, quartet)
by_dp = tf.freq_from_paths(tf.all_op_paths(inst, quartet), quartet)
assert closed.freq == by_dp.freq
print(f"\nquartet {quartet.vertices} labels (closed form == DP): {closed.freq}")

# --- per-edge statistics over many subsets ---------------------------------
# An edge's average label over the subsets containing it separates cycle
# edges from ordinary ones; sampling is deterministic per (seed, edge, size).
edge = (0, 1)
s = tf.sample_edge_stats(inst, edge, i=5, N=20, seed=1)
x = tf.exhaustive_edge_stats(inst, edge, i=5)
print(f"\nedge {edge} at size 5: sampled f={s.f:.3f} (N={s.N}), exact f={x.f:.3f} (N={x.N})")

cycle = tf.ohc(inst)
stats = tf.exhaustive_stats_all_edges(inst, 5)
cyc_f = sorted(stats[e].f for e in cycle.edges())
ord_f = sorted((stats[e].f for e in stats if e not in cycle.edges()), reverse=True)
print(f"cycle-edge averages: {[round(v, 2) for v in cyc_f]}")
print(f"largest ordinary averages: {[round(v, 2) for v in ord_f[:5]]}")
