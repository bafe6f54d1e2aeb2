"""Subset DP for optimal paths/cycles against brute-force enumeration."""

import itertools

import numpy as np
import pytest

import tspfreq as tf
from tspfreq.subset_dp import CapExceededError, path_length

from conftest import rand_inst, unit_square_instance


class TestOpPath:
    def test_unit_square_adjacent_corners(self):
        # every rounded distance is 1, so any Hamiltonian path has length 3
        inst = unit_square_instance()
        p = tf.op_path(inst, range(4), 0, 1)
        assert p.length == 3
        assert p.order[0] == 0 and p.order[-1] == 1
        o = tf.oracle_path(inst, range(4), 0, 1)
        assert p.order == o.order and p.length == o.length

    def test_k6_matches_oracle_all_pairs(self):
        inst = rand_inst(6, 42)
        sel = tf.select(inst, range(6))
        for u in range(6):
            for v in range(u + 1, 6):
                p = tf.op_path(inst, sel, u, v)
                o = tf.oracle_path(inst, sel, u, v)
                assert p.order == o.order
                assert p.length == o.length

    def test_path_has_i_minus_1_edges(self):
        inst = rand_inst(7, 5)
        p = tf.op_path(inst, [0, 2, 3, 4, 6], 2, 6)
        assert len(p.order) == 5
        assert len(p.edges()) == 4

    def test_endpoint_validation(self):
        inst = rand_inst(6, 1)
        with pytest.raises(ValueError, match="distinct"):
            tf.op_path(inst, range(5), 2, 2)
        with pytest.raises(ValueError, match="not in selection"):
            tf.op_path(inst, range(5), 0, 5)

    def test_dp_never_beaten_by_any_enumerated_path(self):
        inst = rand_inst(7, 8)
        sel = tf.select(inst, range(7))
        p = tf.op_path(inst, sel, 1, 4)
        mids = [w for w in range(7) if w not in (1, 4)]
        for perm in itertools.permutations(mids):
            order = (1,) + perm + (4,)
            assert p.length <= path_length(inst, order)


class TestAllOpPaths:
    def test_counts(self):
        inst = rand_inst(6, 3)
        assert len(tf.all_op_paths(inst, range(4))) == 6
        assert len(tf.all_op_paths(inst, range(5))) == 10

    def test_i5_matches_oracle(self):
        inst = rand_inst(5, 17)
        sel = tf.select(inst, range(5))
        for p in tf.all_op_paths(inst, sel):
            o = tf.oracle_path(inst, sel, *p.endpoints)
            assert p.order == o.order and p.length == o.length

    def test_subpaths_are_optimal(self):
        """Every contiguous run of >= 4 vertices inside an optimal path is
        itself the optimal path of its endpoints on its own vertex set."""
        inst = rand_inst(7, 23)
        sel = tf.select(inst, range(7))
        for p in tf.all_op_paths(inst, sel):
            for a in range(len(p.order) - 3):
                for b in range(a + 3, len(p.order)):
                    sub = p.order[a : b + 1]
                    inner = tf.op_path(inst, sorted(sub), sub[0], sub[-1])
                    assert inner.order == sub

    def test_end_edge_removal_gives_smaller_optimum(self):
        inst = rand_inst(8, 31)
        sel = tf.select(inst, range(8))
        for p in tf.all_op_paths(inst, sel)[:6]:
            trimmed = p.order[1:]
            inner = tf.op_path(inst, sorted(trimmed), trimmed[0], trimmed[-1])
            assert inner.order == trimmed


class TestOhc:
    def test_unit_square(self):
        tour = tf.ohc(unit_square_instance())
        assert tour.length == 4

    def test_k9_matches_exhaustive(self):
        inst = rand_inst(9, 77)
        t = tf.ohc(inst)
        o = tf.oracle_cycle(inst)
        assert t.order == o.order and t.length == o.length

    def test_cycle_contains_exactly_i_optimal_paths(self):
        inst = rand_inst(8, 12)
        tour_edges = tf.ohc(inst).edges()
        inside = [
            p for p in tf.all_op_paths(inst, range(8)) if p.edges() <= tour_edges
        ]
        assert len(inside) == 8

    def test_relabel_invariance(self):
        inst = rand_inst(8, 66)
        perm = np.random.default_rng(4).permutation(8)
        m = inst.matrix()[np.ix_(perm, perm)]
        relabeled = tf.Instance(8, "EXPLICIT_MATRIX", matrix=m)
        a, b = tf.ohc(inst), tf.ohc(relabeled)
        # the permuted cycle must be the same cycle, with the same length up
        # to float summation order
        mapped = {(min(perm[u], perm[v]), max(perm[u], perm[v])) for u, v in b.edges()}
        assert mapped == a.edges()
        assert a.length == pytest.approx(b.length, rel=1e-12)

    def test_cap(self):
        inst = tf.gen_random(25, 0)
        with pytest.raises(CapExceededError, match="cap"):
            tf.ohc(inst)
        with pytest.raises(CapExceededError):
            tf.ohc(inst, range(24), cap=23)


class TestOracles:
    def test_square_matches_dp(self):
        inst = unit_square_instance()
        o = tf.oracle_path(inst, range(4), 0, 2)
        p = tf.op_path(inst, range(4), 0, 2)
        assert o.order == p.order

    def test_k7_batch(self):
        for seed in range(15):
            inst = rand_inst(7, 1000 + seed)
            sel = tf.select(inst, range(7))
            for p in tf.all_op_paths(inst, sel):
                o = tf.oracle_path(inst, sel, *p.endpoints)
                assert p.order == o.order and p.length == o.length

    def test_size_cap(self):
        inst = tf.gen_random(12, 0)
        with pytest.raises(CapExceededError, match="oracle"):
            tf.oracle_path(inst, range(11), 0, 1)
        with pytest.raises(CapExceededError, match="oracle"):
            tf.oracle_cycle(inst, range(11))


class TestSelect:
    def test_validation(self):
        inst = rand_inst(6, 0)
        with pytest.raises(ValueError, match="distinct"):
            tf.select(inst, [0, 1, 2, 2])
        with pytest.raises(ValueError, match="at least 4"):
            tf.select(inst, [0, 1, 2])
        with pytest.raises(ValueError, match="out of range"):
            tf.select(inst, [0, 1, 2, 9])

    def test_sorted(self):
        inst = rand_inst(6, 0)
        assert tf.select(inst, [5, 1, 3, 0]).vertices == (0, 1, 3, 5)
