import subprocess
import sys

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from entwit.cli import main
from entwit.io import read_matrix, write_matrix
from entwit.states import horodecki_2x4, upb_tiles_bes


@pytest.fixture
def corpus(tmp_path):
    """Detected, undetected and malformed state files."""
    files = {}
    for name, args in {
        "werner_neg": ["--family", "werner", "--f", "-0.5"],
        "werner_zero": ["--family", "werner", "--f", "0"],
        "mixed33": ["--family", "mixed", "--dims", "3,3"],
        "horodecki": ["--family", "horodecki", "--b", "0.5"],
        "upb": ["--family", "upb"],
    }.items():
        path = tmp_path / f"{name}.txt"
        assert main(["gen", *args, "--out", str(path)]) == 0
        files[name] = path
    bad = {
        "garbage": "not a matrix\n",
        "truncated": "dims 1 2\n0 0 1 0\n",
        "not_psd": "dims 1 2\n0 0 2 0\n0 1 0 0\n1 0 0 0\n1 1 -1 0\n",
        "bad_trace": "dims 1 2\n0 0 1 0\n0 1 0 0\n1 0 0 0\n1 1 1 0\n",
    }
    for name, text in bad.items():
        path = tmp_path / f"{name}.txt"
        path.write_text(text)
        files[name] = path
    files["missing"] = tmp_path / "does_not_exist.txt"
    return files


class TestGen:
    def test_werner_half_is_maximally_mixed(self, tmp_path):
        out = tmp_path / "w.txt"
        assert main(["gen", "--family", "werner", "--f", "0.5", "--out", str(out)]) == 0
        assert_allclose(read_matrix(out).mat, np.eye(4) / 4, atol=1e-16)

    def test_horodecki_trace(self, tmp_path):
        out = tmp_path / "h.txt"
        main(["gen", "--family", "horodecki", "--b", "0.218", "--out", str(out)])
        mf = read_matrix(out)
        assert mf.dims == (2, 4)
        assert np.trace(mf.mat).real == pytest.approx(1, abs=1e-15)
        assert_array_equal(mf.mat, horodecki_2x4(0.218).mat)

    def test_upb_idempotent(self, tmp_path):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        main(["gen", "--family", "upb", "--out", str(a)])
        main(["gen", "--family", "upb", "--out", str(b)])
        assert a.read_text() == b.read_text()
        assert_array_equal(read_matrix(a).mat, upb_tiles_bes().mat)

    @pytest.mark.parametrize("args,interval", [
        (["--family", "werner", "--f", "1.5"], "[-1, 1]"),
        (["--family", "horodecki", "--b", "1"], "(0, 1)"),
        (["--family", "upb-noisy", "--p", "-0.1"], "[0, 1]"),
    ])
    def test_out_of_range_reports_interval(self, args, interval, capsys):
        assert main(["gen", *args]) == 2
        assert interval in capsys.readouterr().err

    def test_missing_parameter(self, capsys):
        assert main(["gen", "--family", "werner"]) == 2
        assert "--f" in capsys.readouterr().err

    def test_random_seeded(self, tmp_path):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        for p in (a, b):
            main(["gen", "--family", "random-ppt", "--dims", "3x3", "--seed", str(2**64 - 1), "--out", str(p)])
        assert a.read_text() == b.read_text()

    def test_seed_range(self):
        with pytest.raises(SystemExit) as exc:
            main(["gen", "--family", "random", "--dims", "2,2", "--seed", str(2**64)])
        assert exc.value.code == 2


class TestAnalyze:
    def test_werner_detected(self, corpus, capsys):
        assert main(["analyze", str(corpus["werner_neg"])]) == 1
        out = capsys.readouterr().out
        line = next(l for l in out.splitlines() if l.startswith("w_realign"))
        assert float(line.split()[1]) == pytest.approx(-0.5, abs=1e-12)

    @pytest.mark.parametrize("name", ["mixed33", "werner_zero"])
    def test_undetected(self, corpus, name, capsys):
        assert main(["analyze", str(corpus[name])]) == 0
        assert "undetected" in capsys.readouterr().out

    def test_horodecki_with_tang(self, corpus, capsys):
        assert main(["analyze", str(corpus["horodecki"])]) == 0
        assert main(["analyze", str(corpus["horodecki"]), "--map", "tang:u=0.849"]) == 1
        lines = capsys.readouterr().out.splitlines()
        ppt = [l for l in lines if l.startswith("ppt_min_eig")][-1]
        tang = [l for l in lines if l.startswith("map_lambda_min")][-1]
        assert ppt.endswith("-") and tang.endswith("DETECTED")

    def test_upb_realignment_only(self, corpus, capsys):
        assert main(["analyze", str(corpus["upb"])]) == 1
        lines = {l.split()[0]: l for l in capsys.readouterr().out.splitlines()[1:-1]}
        assert lines["realign_norm"].endswith("DETECTED")
        assert lines["ppt_min_eig"].endswith("-")

    @pytest.mark.parametrize("name", ["garbage", "truncated", "not_psd", "bad_trace", "missing"])
    def test_malformed_exit_2(self, corpus, name, capsys):
        assert main(["analyze", str(corpus[name])]) == 2
        err = capsys.readouterr().err
        assert "error" in err
        if name == "not_psd":
            assert "eigenvalue" in err
        if name == "bad_trace":
            assert "trace" in err

    def test_map_dimension_mismatch(self, corpus, capsys):
        assert main(["analyze", str(corpus["werner_neg"]), "--map", "tang"]) == 2

    def test_csv(self, corpus, tmp_path):
        out = tmp_path / "r.csv"
        main(["analyze", str(corpus["werner_neg"]), "--csv", str(out)])
        header, row = out.read_text().splitlines()
        assert header.split(",")[0] == "realign_norm" and header.endswith(",detected")
        assert row.endswith(",1")

    def test_witness_and_map_files(self, corpus, tmp_path, capsys):
        W = tmp_path / "W.txt"
        main(["witness", str(corpus["upb"]), "--out", str(W)])
        assert main(["analyze", str(corpus["upb"]), "--witness", str(W), "--map", f"map:{W}"]) == 1
        out = capsys.readouterr().out
        assert "witness[" in out and "map_lambda_min[map:" in out


class TestWitness:
    def test_werner_zero_realign(self, corpus, tmp_path):
        out = tmp_path / "W.txt"
        assert main(["witness", str(corpus["werner_zero"]), "--method", "thm1", "--out", str(out)]) == 0
        mf = read_matrix(out)
        assert mf.meta["origin"] == "realign"
        assert_allclose(mf.mat, [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], atol=1e-8)

    def test_optimize_tight_witness(self, corpus, tmp_path):
        W, Wo = tmp_path / "W.txt", tmp_path / "Wo.txt"
        main(["witness", str(corpus["werner_zero"]), "--out", str(W)])
        main(["witness", str(W), "--kind", "witness", "--optimize", "--out", str(Wo)])
        plain, opt = W.read_text().splitlines(), Wo.read_text().splitlines()
        assert "# epsilon 0" in opt
        assert [l for l in opt if l != "# epsilon 0"] == plain

    def test_projection_on_mixed(self, corpus, tmp_path):
        out = tmp_path / "P.txt"
        main(["witness", str(corpus["mixed33"]), "--method", "projection", "--restarts", "5", "--out", str(out)])
        mf = read_matrix(out)
        assert_allclose(mf.mat, 0, atol=1e-12)
        assert float(mf.meta["epsilon"]) == pytest.approx(1 / 9)

    def test_ppt_alias(self, corpus, tmp_path):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        main(["witness", str(corpus["werner_neg"]), "--method", "ppt", "--out", str(a)])
        main(["witness", str(corpus["werner_neg"]), "--method", "thm2", "--out", str(b)])
        assert a.read_text() == b.read_text()

    def test_witness_file_validation(self, tmp_path, capsys):
        bad = tmp_path / "bad.txt"
        write_matrix(bad, np.triu(np.ones((4, 4))), (2, 2))
        assert main(["witness", str(bad), "--kind", "witness", "--optimize"]) == 2
        assert "Hermitian" in capsys.readouterr().err


class TestScanThresholdRate:
    def test_werner(self, capsys):
        assert main(["scan", "--family", "werner", "--range=-1:1:201"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "# entwit-scan v1"
        cols = lines[1].split(",")
        rows = [dict(zip(cols, l.split(","))) for l in lines[2:]]
        assert len(rows) == 201
        for r in rows:
            assert (r["realign_detected"] == "1") == (float(r["param"]) < -1e-12)

    def test_bad_range(self, capsys):
        assert main(["scan", "--family", "werner", "--range", "0:1"]) == 2
        assert main(["scan", "--family", "horodecki", "--range", "0:1:11"]) == 2

    def test_threshold_non_bracketing(self, capsys):
        assert main(["threshold", "--family", "upb-noisy", "--detector", "ppt"]) == 2
        err = capsys.readouterr().err
        assert "d(0)" in err and "d(1)" in err

    def test_threshold_unknown_detector(self, capsys):
        assert main(["threshold", "--family", "upb-noisy", "--detector", "magic"]) == 2

    def test_threshold_deterministic(self, capsys):
        main(["threshold", "--family", "upb-noisy", "--detector", "realign"])
        first = capsys.readouterr().out
        main(["threshold", "--family", "upb-noisy", "--detector", "realign"])
        assert capsys.readouterr().out == first

    def test_threshold_from_state_file(self, corpus, capsys):
        assert main(["threshold", "--state", str(corpus["werner_neg"]), "--detector", "ppt", "--tol", "1e-8"]) == 0
        p = float(capsys.readouterr().out.split()[2])
        # lowest eigenvalue of the partial transpose is -p/4 + (1 - p)/4
        assert p == pytest.approx(0.5, abs=1e-7)

    def test_rate(self, corpus, tmp_path, capsys):
        W = tmp_path / "W.txt"
        main(["witness", str(corpus["upb"]), "--out", str(W)])
        assert main(["rate", "--witness", str(W), "--count", "20", "--seed", "1"]) == 0
        out = capsys.readouterr().out
        assert "witness_rate" in out and "realign_rate" in out


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "entwit", "gen", "--family", "werner", "--f", "0"],
                         capture_output=True, text=True, check=True)
    assert res.stdout.startswith("# family werner\ndims 2 2\n")


@pytest.mark.parametrize("spec", ["tang:0.849,0.218", "tang:u=0.849,b=0.218", "tang:0.849,b=0.218"])
def test_tang_spec_forms(spec, capsys):
    main(["threshold", "--family", "horodecki-noisy", "--detector", spec])
    assert capsys.readouterr().out.startswith("p* = 0.84123")


@pytest.mark.parametrize("spec", ["tang:u=0.8,0.2", "tang:1,2,3,4", "tang:u=1,u=2"])
def test_tang_spec_rejects(spec):
    assert main(["threshold", "--family", "horodecki-noisy", "--detector", spec]) == 2
