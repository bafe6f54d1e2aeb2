"""Trajectory classification, thresholding, recovery, and tour evaluation."""

import math

import pytest

import tspfreq as tf
from tspfreq.classify import (
    DROP,
    ERR_POSITIVE,
    KEEP,
    RATIO_BELOW,
    ZERO_FREQ,
    _apply_decrement_rule,
    candidate_set_text,
    sparsified_text,
)
from tspfreq.freq import EdgeStats

from conftest import rand_inst


def fake_stats(ps, i0=4, pairs_scale=1):
    """EdgeStats carrying prescribed probabilities at sizes i0, i0+1, ..."""
    out = []
    for k, p in enumerate(ps):
        i = i0 + k
        pairs = math.comb(i, 2)
        # choose N so that F = p * pairs * N is integral enough
        N = 1000 * pairs_scale
        out.append(EdgeStats(edge=(0, 1), i=i, N=N, F=round(p * pairs * N)))
    return out


class TestDecrementRule:
    def test_constant_probability_is_kept(self):
        stats = fake_stats([0.5, 0.5, 0.5, 0.5])
        verdict, reason, step = _apply_decrement_rule(stats)
        assert verdict == KEEP and reason is None

    def test_sharp_drop_fires(self):
        stats = fake_stats([0.6, 0.5], i0=6)
        verdict, reason, step = _apply_decrement_rule(stats)
        assert verdict == DROP and reason == ERR_POSITIVE and step == 6

    def test_allowed_drop_is_kept(self):
        # pd exactly at the cycle-edge allowance never fires
        p4 = 0.6
        p5 = p4 - 2 * p4 / 12
        verdict, _, _ = _apply_decrement_rule(fake_stats([p4, p5]))
        assert verdict == KEEP

    def test_harmonic_rule(self):
        stats = fake_stats([0.5, 0.38])
        verdict, reason, _ = _apply_decrement_rule(stats, rule="harmonic")
        assert verdict == DROP and reason == RATIO_BELOW

    def test_zero_frequency_at_last_size(self):
        stats = fake_stats([0.0, 0.0])
        verdict, reason, _ = _apply_decrement_rule(stats)
        assert verdict == DROP and reason == ZERO_FREQ

    def test_consecutive_knob(self):
        stats = fake_stats([0.6, 0.5, 0.5, 0.4], i0=5)
        verdict, _, _ = _apply_decrement_rule(stats, consecutive=2)
        assert verdict == KEEP  # violations at 5->6 and 7->8 are not adjacent
        verdict, _, _ = _apply_decrement_rule(stats, consecutive=1)
        assert verdict == DROP

    def test_monotone_in_evidence(self):
        """Extending a trajectory never converts DROP back to KEEP."""
        base = [0.6, 0.4]
        for extra in ([0.4], [0.4, 0.4], [0.6, 0.7]):
            verdict, _, _ = _apply_decrement_rule(fake_stats(base + extra))
            assert verdict == DROP


class TestClassifyByDecrement:
    def test_k9_full_separation_on_frozen_seed(self):
        # over sizes 4..6 every ordinary edge violates the decline law while
        # all nine cycle edges survive (seed chosen to exhibit the clean case)
        inst = rand_inst(9, 12)
        cyc = tf.ohc(inst).edges()
        traj = tf.classify_by_decrement(inst, (4, 6), exhaustive=True)
        dropped = {t.edge for t in traj if t.verdict == DROP}
        assert len(dropped) == 27
        assert dropped.isdisjoint(cyc)

    def test_k14_drop_counts_regression(self):
        inst = rand_inst(14, 0)
        traj = tf.classify_by_decrement(inst, (4, 8), exhaustive=True)
        cyc = tf.ohc(inst).edges()
        dropped_ord = {t.edge for t in traj if t.verdict == DROP} - cyc
        # the filter removes the vast majority of the 77 ordinary edges
        assert len(dropped_ord) >= 65

    def test_range_validation(self):
        inst = rand_inst(8, 1)
        with pytest.raises(ValueError, match="i range"):
            tf.classify_by_decrement(inst, (4, 9))
        with pytest.raises(ValueError, match="i range"):
            tf.classify_by_decrement(inst, (5, 5))

    def test_sampled_matches_exhaustive_when_saturated(self):
        inst = rand_inst(8, 3)
        a = tf.classify_by_decrement(inst, (4, 6), N=10**6, seed=0)
        b = tf.classify_by_decrement(inst, (4, 6), exhaustive=True)
        assert [(t.edge, t.verdict) for t in a] == [(t.edge, t.verdict) for t in b]


class TestClassifyByThreshold:
    def test_flb_rule(self):
        inst = rand_inst(9, 12)
        sg = tf.classify_by_threshold(inst, 6, 0, threshold_rule="f_lb", exhaustive=True)
        stats = tf.exhaustive_stats_all_edges(inst, 6)
        expected = {e for e, s in stats.items() if s.f >= math.comb(6, 2) / 2}
        assert set(sg.kept_edges) == expected
        assert sg.provenance["threshold"] == 7.5

    def test_zero_threshold_keeps_positive_frequency(self):
        inst = rand_inst(8, 5)
        sg = tf.classify_by_threshold(
            inst, 5, 0, threshold_rule=("fixed", 0.0), exhaustive=True
        )
        assert len(sg.kept_edges) == math.comb(8, 2)

    def test_kth_rule_needs_tour(self):
        inst = rand_inst(8, 5)
        with pytest.raises(ValueError, match="reference tour"):
            tf.classify_by_threshold(inst, 5, 10, threshold_rule=("kth_ohc", 1))

    def test_kth_rule_counts(self):
        inst = rand_inst(9, 12)
        tour = tf.ohc(inst)
        sg = tf.classify_by_threshold(
            inst, 5, 0, threshold_rule=("kth_ohc", 1), tour=tour, exhaustive=True
        )
        stats = tf.exhaustive_stats_all_edges(inst, 5)
        thr = min(stats[e].f for e in tour.edges())
        assert set(sg.kept_edges) == {e for e, s in stats.items() if s.f >= thr}
        assert sg.provenance["kept_ohc"] == 9
        assert 0 <= sg.provenance["pct_ordinary_kept"] <= 100

    def test_flb_rule_subsumes_first_smallest_when_below(self):
        """When C(i,2)/2 is at most the smallest cycle-edge average, the f_lb
        rule keeps a superset of what the first-smallest rule keeps."""
        inst = rand_inst(9, 4)
        tour = tf.ohc(inst)
        i = 6
        stats = tf.exhaustive_stats_all_edges(inst, i)
        smallest = min(stats[e].f for e in tour.edges())
        assert math.comb(i, 2) / 2 <= smallest  # holds on this seed
        flb = tf.classify_by_threshold(inst, i, 0, threshold_rule="f_lb", exhaustive=True)
        kth = tf.classify_by_threshold(
            inst, i, 0, threshold_rule=("kth_ohc", 1), tour=tour, exhaustive=True
        )
        assert set(kth.kept_edges) <= set(flb.kept_edges)

    def test_degree_violations_reported_not_repaired(self):
        inst = rand_inst(9, 12)
        sg = tf.classify_by_threshold(
            inst, 5, 0, threshold_rule=("fixed", 10.0), exhaustive=True
        )
        assert sg.kept_edges == []
        assert sg.degree_violations() == list(range(9))
        assert sg.provenance["degree_violations"] == list(range(9))


class TestRecoverOhc:
    def test_k10_recovers_exact_cycle(self):
        inst = rand_inst(10, 2)
        res = tf.recover_ohc(inst, tf.RecoveryConfig(seed=2))
        assert res.i_eval == 8
        assert res.tour.order == tf.ohc(inst).order

    def test_small_n_degenerates_to_exact(self):
        inst = rand_inst(6, 4)
        res = tf.recover_ohc(inst)
        assert res.i_eval == 6
        assert res.tour.order == tf.ohc(inst).order
        assert len(res.graph.kept_edges) == math.comb(6, 2)

    def test_survivor_failure_raises_with_vertices(self):
        inst = rand_inst(12, 1000)
        with pytest.raises(tf.SurvivorGraphError) as exc:
            tf.recover_ohc(inst, tf.RecoveryConfig(seed=0))
        assert exc.value.vertices  # names the low-degree vertices

    def test_recovered_tour_is_minimal_over_survivors(self):
        inst = rand_inst(10, 2)
        res = tf.recover_ohc(inst, tf.RecoveryConfig(seed=2))
        kept = set(res.graph.kept_edges)
        assert res.tour.edges() <= kept

    def test_cap(self):
        inst = tf.gen_random(30, 0)
        with pytest.raises(tf.CapExceededError):
            tf.recover_ohc(inst)


class TestEvaluateAgainstTour:
    def test_schema_and_identities(self):
        inst = rand_inst(8, 6)
        tour = tf.ohc(inst)
        traj = tf.classify_by_decrement(inst, (4, 6), exhaustive=True)
        report = tf.evaluate_against_tour(traj, tour)
        assert [r.i for r in report.rows] == [4, 5, 6]
        for row in report.rows:
            assert row.F_ohc <= row.F_tot
            assert 0 <= row.p_ohc_pct <= 100
            assert row.p_min_e <= row.p_e
            assert row.p_max_g >= row.p_g
        assert len(report.err_rows) == 2
        # totals follow the per-subgraph identity summed over all subsets
        n = 8
        for row in report.rows:
            i = row.i
            assert row.F_tot == math.comb(i, 2) * (i - 1) * math.comb(n, i)

    def test_wrong_tour_size(self):
        inst = rand_inst(8, 6)
        other = tf.ohc(rand_inst(6, 1))
        traj = tf.classify_by_decrement(inst, (4, 5), exhaustive=True)
        with pytest.raises(ValueError, match="tour has 6"):
            tf.evaluate_against_tour(traj, other)

    def test_csv_emission(self):
        inst = rand_inst(8, 6)
        tour = tf.ohc(inst)
        traj = tf.classify_by_decrement(inst, (4, 5), exhaustive=True)
        report = tf.evaluate_against_tour(traj, tour)
        head = report.summary_csv().splitlines()[0]
        assert head == "i,F_tot,F_ohc,p_ohc_pct,p_e,p_g,p_min_e,p_max_g"
        head = report.err_csv().splitlines()[0]
        assert head == "i_from,i_to,err_max_ohc,n_pos_ohc,err_max_ord,n_pos_ord"


class TestEmissions:
    def test_sparsified_text(self):
        inst = rand_inst(8, 5)
        sg = tf.classify_by_threshold(inst, 5, 0, threshold_rule="f_lb", exhaustive=True)
        text = sparsified_text(sg)
        lines = text.strip().splitlines()
        assert lines[0].startswith("# sparsified graph n=8")
        assert lines[1].startswith("# {")
        for ln in lines[2:]:
            u, v = map(int, ln.split())
            assert (u, v) in set(sg.kept_edges)

    def test_candidate_text_sorted_by_frequency(self):
        inst = rand_inst(8, 5)
        stats = tf.exhaustive_stats_all_edges(inst, 5)
        sg = tf.classify_by_threshold(inst, 5, 0, threshold_rule="f_lb", exhaustive=True)
        text = candidate_set_text(sg, stats)
        lines = text.strip().splitlines()
        assert len(lines) == 8
        v0, neigh = lines[0].split(":")
        order = [int(x) for x in neigh.split()]
        fs = [stats[(min(0, w), max(0, w))].f for w in order]
        assert fs == sorted(fs, reverse=True)
