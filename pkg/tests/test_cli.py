"""End-to-end CLI runs: schemas, determinism, and exit codes."""

import math
from pathlib import Path

import pytest

import tspfreq as tf
from tspfreq.cli import main

from conftest import euc2d_text


def run(tmp_path, *argv):
    out = tmp_path / "out"
    out.mkdir(exist_ok=True)
    code = main([*argv, "--out", str(out)])
    return code, out


class TestFreqgraph:
    def test_outputs_and_vertex_identity(self, tmp_path):
        code, out = run(tmp_path, "freqgraph", "--random", "8,3", "--perturb", "--seed", "3")
        assert code == 0
        ranks = (out / "freq_ranks.csv").read_text().splitlines()
        assert ranks[0].startswith("# tspfreq")
        assert "rank,freq,is_ohc" in ranks[2]
        split = (out / "vertex_split.csv").read_text().splitlines()
        assert split[1] == "vertex,ohc_sum,ord_sum"
        for row in split[2:]:
            _, ohc_sum, ord_sum = map(int, row.split(","))
            assert ohc_sum + ord_sum == 49  # (n-1)^2 for n = 8

    def test_cap_error_names_flag(self, tmp_path, capsys):
        code, _ = run(tmp_path, "freqgraph", "--random", "30,1")
        assert code == 4
        assert "--cap" in capsys.readouterr().err

    def test_smallest_ohc_flagged(self, tmp_path):
        _, out = run(tmp_path, "freqgraph", "--random", "8,3", "--perturb", "--seed", "3")
        header = (out / "freq_ranks.csv").read_text().splitlines()[1]
        assert "smallest_ohc_freq=" in header


class TestTrajectory:
    def test_per_edge_csv(self, tmp_path):
        code, out = run(
            tmp_path, "trajectory", "--random", "8,5", "--perturb",
            "--i-range", "4..6", "--exhaustive", "--seed", "5",
        )
        assert code == 0
        lines = (out / "trajectories.csv").read_text().splitlines()
        assert lines[1] == "u,v,i,F,f,p"
        assert len(lines) == 2 + math.comb(8, 2) * 3

    def test_empty_range_is_error(self, tmp_path, capsys):
        code, _ = run(tmp_path, "trajectory", "--random", "8,5", "--i-range", "6..4")
        assert code == 3
        assert "range" in capsys.readouterr().err

    def test_class_summary_with_tour(self, tmp_path):
        inst = tf.perturb(tf.gen_random(8, 5), seed=5)
        tour = tf.ohc(inst)
        tour_path = tmp_path / "ref.tour"
        tour_path.write_text(tf.tour_to_text(tour))
        code, out = run(
            tmp_path, "trajectory", "--random", "8,5", "--perturb",
            "--i-range", "4..6", "--exhaustive", "--seed", "5",
            "--tour", str(tour_path),
        )
        assert code == 0
        assert (out / "class_summary.csv").exists()
        assert (out / "err.csv").exists()


class TestSample:
    def test_requires_tour(self, tmp_path, capsys):
        code, _ = run(tmp_path, "sample", "--random", "8,5", "--i-range", "4..5")
        assert code == 3
        assert "--tour" in capsys.readouterr().err

    def test_zero_samples_is_error(self, tmp_path):
        inst = tf.perturb(tf.gen_random(8, 5), seed=5)
        tour_path = tmp_path / "ref.tour"
        tour_path.write_text(tf.tour_to_text(tf.ohc(inst)))
        code, _ = run(
            tmp_path, "sample", "--random", "8,5", "--perturb", "--seed", "5",
            "--i-range", "4..5", "--samples", "0", "--tour", str(tour_path),
        )
        assert code == 3

    def test_smallest_table(self, tmp_path):
        inst = tf.perturb(tf.gen_random(9, 5), seed=5)
        tour_path = tmp_path / "ref.tour"
        tour_path.write_text(tf.tour_to_text(tf.ohc(inst)))
        code, out = run(
            tmp_path, "sample", "--random", "9,5", "--perturb", "--seed", "5",
            "--i-range", "4..5", "--samples", "20", "--tour", str(tour_path),
        )
        assert code == 0
        lines = (out / "smallest_ohc.csv").read_text().splitlines()
        assert lines[1].startswith("i,fs1,")
        assert len(lines) == 4


class TestAnalytics:
    def test_summary_values(self, tmp_path):
        code, out = run(tmp_path, "analytics", "--n", "1000", "--grid", "1000,100000,3")
        assert code == 0
        summary = dict(
            ln.split(",") for ln in (out / "summary.csv").read_text().splitlines()[2:]
        )
        assert summary["i_d"] == "80"
        assert summary["p0"] == "502"
        assert summary["peak_i"] == "33"
        assert summary["threshold_index"] == "546"
        assert summary["constants_agree"] == "1"
        minid = (out / "minid.csv").read_text().splitlines()
        assert minid[1] == "n,id,bound"
        for row in minid[2:]:
            n, i_d, bound = row.split(",")
            assert int(i_d) < float(bound)

    def test_small_n_rejected(self, tmp_path):
        code, _ = run(tmp_path, "analytics", "--n", "7")
        assert code == 3

    def test_curves_exist(self, tmp_path):
        _, out = run(tmp_path, "analytics", "--n", "100")
        for name in ("p.csv", "pd.csv", "j_pct.csv", "k_pct.csv", "l_pct.csv",
                     "jl_pct.csv", "r.csv", "summary.csv"):
            body = (out / name).read_text().splitlines()
            assert body[0].startswith("# tspfreq")


class TestSparsifyAndSolve:
    def test_decrement_sparsify(self, tmp_path):
        code, out = run(
            tmp_path, "sparsify", "--random", "9,12", "--perturb", "--seed", "12",
            "--mode", "decrement", "--i-range", "4..6", "--exhaustive", "--candidates",
        )
        assert code == 0
        text = (out / "sparsified.txt").read_text()
        assert text.splitlines()[1].startswith("# sparsified graph n=9 edges=9")
        assert (out / "candidates.txt").exists()

    def test_threshold_needs_i(self, tmp_path, capsys):
        code, _ = run(tmp_path, "sparsify", "--random", "9,12", "--mode", "threshold")
        assert code == 3
        assert "--i" in capsys.readouterr().err

    def test_solve_roundtrip(self, tmp_path):
        inst = tf.perturb(tf.gen_random(10, 2), seed=2)
        ref = tmp_path / "ref.tour"
        ref.write_text(tf.tour_to_text(tf.ohc(inst)))
        code, out = run(
            tmp_path, "solve", "--random", "10,2", "--perturb", "--seed", "2",
            "--tour", str(ref),
        )
        assert code == 0
        verdict = (out / "verdict.txt").read_text()
        assert "edges_match: 1" in verdict
        recovered = tf.parse_tour((out / "recovered.tour").read_text(), inst)
        assert recovered.order == tf.ohc(inst).order

    def test_solve_failure_exit_code(self, tmp_path):
        code, _ = run(
            tmp_path, "solve", "--random", "12,1000", "--perturb", "--seed", "0",
        )
        assert code == 5


class TestMisc:
    def test_idsolve(self, capsys):
        assert main(["idsolve", "--n", "1000", "--residual-corrected"]) == 0
        out = capsys.readouterr().out
        assert "i_d(1000) = 80" in out
        assert "residual-corrected) = 73" in out

    def test_missing_out_dir(self, tmp_path, capsys):
        code = main(["freqgraph", "--random", "8,1", "--out", str(tmp_path / "nope")])
        assert code == 3
        assert "does not exist" in capsys.readouterr().err

    def test_instance_xor_random(self, tmp_path, capsys):
        code, _ = run(tmp_path, "freqgraph")
        assert code == 3

    def test_instance_file_loading(self, tmp_path):
        tsp = tmp_path / "sq.tsp"
        tsp.write_text(euc2d_text([(0, 0), (0, 10), (10, 10), (10, 0)], name="square"))
        code, out = run(tmp_path, "freqgraph", "--instance", str(tsp), "--perturb", "--seed", "1")
        assert code == 0

    def test_byte_identical_reruns(self, tmp_path):
        outs = []
        for sub in ("a", "b"):
            out = tmp_path / sub
            out.mkdir()
            code = main([
                "trajectory", "--random", "8,5", "--perturb", "--i-range", "4..5",
                "--samples", "6", "--seed", "5", "--out", str(out),
            ])
            assert code == 0
            outs.append((out / "trajectories.csv").read_bytes())
        assert outs[0] == outs[1]

    def test_worker_count_keeps_bytes(self, tmp_path):
        outs = []
        for sub, workers in (("w1", "1"), ("w4", "4")):
            out = tmp_path / sub
            out.mkdir()
            code = main([
                "trajectory", "--random", "8,5", "--perturb", "--i-range", "4..5",
                "--samples", "6", "--seed", "5", "--workers", workers, "--out", str(out),
            ])
            assert code == 0
            body = (out / "trajectories.csv").read_text().splitlines()[2:]
            outs.append(body)
        assert outs[0] == outs[1]
