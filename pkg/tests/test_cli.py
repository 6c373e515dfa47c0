"""Tests for the command-line interface: formats, determinism, exit codes."""

import json
import math

import pytest

import hypstat as hs
from hypstat import cli


def run_cli(capsys, argv):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


class TestGrowthCommand:
    def test_json_document(self, capsys):
        code, out, err = run_cli(
            capsys, ["growth", "--coding", "free:2", "--horizon", "12"]
        )
        assert code == 0
        assert err == ""
        doc = json.loads(out)
        assert doc["command"] == "growth"
        assert doc["lam"] == 3.0
        assert not doc["elementary"]
        # counts are decimal strings so arbitrary precision survives JSON
        assert doc["counts"]["12"] == "708588"
        assert list(doc)[-1] == "meta"
        assert doc["meta"]["argv"][0] == "growth"
        assert doc["meta"]["version"] == hs.__version__

    def test_float_rendering_keeps_decimal_point(self, capsys):
        _code, out, _err = run_cli(
            capsys, ["growth", "--coding", "free:2", "--horizon", "12"]
        )
        assert '"lam": 3.0' in out

    def test_small_horizon_rejected(self, capsys):
        # domain errors raised by the library surface as exit 3
        code, _out, err = run_cli(
            capsys, ["growth", "--coding", "free:2", "--horizon", "6"]
        )
        assert code == 3
        assert "horizon" in err

    def test_non_integer_horizon_is_usage_error(self, capsys):
        code, _out, _err = run_cli(
            capsys, ["growth", "--coding", "free:2", "--horizon", "soon"]
        )
        assert code == 2


class TestDeterminism:
    def test_identical_bytes_across_runs(self, capsys):
        argv = ["averaging", "--coding", "free:2", "--weights", "hom:a=1,b=0",
                "--ngrid", "5,10,15"]
        _code, first, _err = run_cli(capsys, argv)
        _code, second, _err = run_cli(capsys, argv)
        assert first == second

    def test_threaded_scan_matches_serial(self, capsys, monkeypatch):
        argv = ["scan-lattice", "--coding", "free:2", "--weights",
                "hom:a=1,b=1", "--tgrid", "0.1:3:0.05"]
        monkeypatch.setenv("HYPSTAT_THREADS", "3")
        _code, threaded, _err = run_cli(capsys, argv)
        monkeypatch.setenv("HYPSTAT_THREADS", "1")
        _code, serial, _err = run_cli(capsys, argv)
        assert threaded == serial

    def test_big_counts_survive_json(self, capsys):
        code, out, _err = run_cli(
            capsys,
            ["dist", "--coding", "free:2", "--weights", "hom:a=1,b=0", "--n", "40"],
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["total"] == str(4 * 3**39)
        assert sum(int(c) for c in doc["counts"]) == 4 * 3**39


class TestFormats:
    def test_csv_report(self, capsys):
        code, out, _err = run_cli(
            capsys,
            ["clt", "--coding", "free:2", "--weights", "hom:a=1,b=0",
             "--ngrid", "16,36", "--format", "csv"],
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "n,observed,predicted,residual"
        assert len(lines) == 3
        assert lines[1].startswith("16,")

    def test_text_report(self, capsys):
        code, out, _err = run_cli(
            capsys,
            ["averaging", "--coding", "free:2", "--weights", "hom:a=1,b=0",
             "--ngrid", "5,10,15", "--format", "text"],
        )
        assert code == 0
        assert "law: averaging" in out
        assert "RESULT: PASS" in out
        assert out.count("PASS") >= 3

    def test_csv_needs_report_command(self, capsys):
        code, _out, err = run_cli(
            capsys, ["growth", "--coding", "free:2", "--format", "csv"]
        )
        assert code == 2
        assert "csv" in err

    def test_out_writes_file(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        code, out, _err = run_cli(
            capsys,
            ["degeneracy", "--coding", "free:2", "--weights", "wordlen",
             "--ncap", "16", "--out", str(target)],
        )
        assert code == 0
        assert out == ""
        doc = json.loads(target.read_text(encoding="utf-8"))
        assert doc["command"] == "degeneracy"
        assert doc["passed"] is True


class TestPipelines:
    def test_stats_document(self, capsys):
        code, out, _err = run_cli(
            capsys, ["stats", "--coding", "free:2", "--weights", "hom:a=1,b=0"]
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["drift"] == [0.0]
        assert abs(doc["sigma2"] - 1.0) < 1e-6
        assert doc["degenerate"] is False

    def test_pressure_document(self, capsys):
        code, out, _err = run_cli(
            capsys,
            ["pressure", "--coding", "free:2", "--weights", "hom:a=1,b=0",
             "--s", "0.5"],
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["pressure"] == pytest.approx(1.2129108355248301, abs=1e-9)
        assert doc["residual"] <= 1e-12

    def test_failing_report_exits_one(self, capsys):
        code, out, _err = run_cli(
            capsys,
            ["mclt", "--coding", "free:2", "--weights", "hom:a=1|1,b=0|0",
             "--ngrid", "16"],
        )
        assert code == 1
        doc = json.loads(out)
        assert doc["passed"] is False

    def test_lattice_llt_exits_three(self, capsys):
        code, _out, err = run_cli(
            capsys,
            ["llt", "--coding", "free:2", "--weights", "hom:a=1,b=0",
             "--interval=-0.5,0.5", "--ngrid", "50"],
        )
        assert code == 3
        assert "lattice" in err

    def test_vector_weight_spec(self, capsys):
        code, out, _err = run_cli(
            capsys,
            ["stats", "--coding", "free:2", "--weights", "hom:a=1|0,b=0|1"],
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["sigma2"] is None
        assert doc["positive_definite"] is True

    def test_wordlen_weight_spec(self, capsys):
        code, out, _err = run_cli(
            capsys,
            ["degeneracy", "--coding", "free:2", "--weights", "wordlen",
             "--ncap", "16"],
        )
        assert code == 0
        assert json.loads(out)["passed"] is True


class TestFileInputs:
    def test_coding_and_weights_from_files(self, capsys, tmp_path, mirror, mirror_hom):
        coding_path = tmp_path / "mirror.json"
        coding_path.write_text(
            json.dumps(hs.dump_coding(mirror)), encoding="utf-8"
        )
        weights_path = tmp_path / "weights.json"
        weights_path.write_text(
            json.dumps(hs.dump_weights(mirror_hom)), encoding="utf-8"
        )
        code, out, _err = run_cli(
            capsys,
            ["dist", "--coding", str(coding_path), "--weights",
             "edges:@" + str(weights_path), "--n", "6", "--overcounted"],
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["total"] == "1946"
        assert doc["overcount_multiplicity"] == 1

    def test_missing_coding_file_exits_three(self, capsys, tmp_path):
        code, _out, err = run_cli(
            capsys,
            ["growth", "--coding", str(tmp_path / "absent.json")],
        )
        assert code == 3
        assert err != ""


class TestScanLattice:
    def test_integer_weights_report_witness(self, capsys):
        code, out, _err = run_cli(
            capsys,
            ["scan-lattice", "--coding", "free:2", "--weights", "hom:a=1,b=0",
             "--tgrid", "1:3:1"],
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["lattice_scale"] == 1
        assert doc["witness"]["t"] == pytest.approx(2.0 * math.pi)
        assert abs(doc["witness"]["gap"]) <= 1e-9
        assert len(doc["points"]) == 3

    def test_irrational_weights_have_no_witness(self, capsys):
        code, out, _err = run_cli(
            capsys,
            ["scan-lattice", "--coding", "free:2", "--weights",
             "hom:a=1,b=1.4142135623730951", "--tgrid", "0.5:2:0.5"],
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["lattice_scale"] is None
        assert doc["witness"] is None
        assert doc["min_gap"] > 0.0


class TestValidateCommand:
    def test_free_group_passes(self, capsys):
        code, out, _err = run_cli(
            capsys, ["validate", "--coding", "free:2", "--depth", "5"]
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["ok"] is True
        assert doc["paths_per_depth"] == ["1", "4", "12", "36", "108", "324"]

    def test_non_injective_coding_fails(self, capsys, tmp_path, mirror):
        coding_path = tmp_path / "mirror.json"
        coding_path.write_text(
            json.dumps(hs.dump_coding(mirror)), encoding="utf-8"
        )
        code, out, _err = run_cli(
            capsys, ["validate", "--coding", str(coding_path), "--depth", "3"]
        )
        assert code == 1
        assert json.loads(out)["ok"] is False


class TestUsageErrors:
    def test_unknown_command(self, capsys):
        code, _out, _err = run_cli(capsys, ["bogus"])
        assert code == 2

    def test_no_command_prints_usage(self, capsys):
        code, _out, _err = run_cli(capsys, [])
        assert code == 2

    def test_descending_grid_rejected(self, capsys):
        code, _out, err = run_cli(
            capsys,
            ["clt", "--coding", "free:2", "--weights", "hom:a=1,b=0",
             "--ngrid", "50:10"],
        )
        assert code == 2
        assert "grid" in err

    def test_malformed_weight_spec(self, capsys):
        code, _out, err = run_cli(
            capsys,
            ["stats", "--coding", "free:2", "--weights", "hom:a"],
        )
        assert code == 2
        assert "hom" in err

    def test_missing_weights_file_exits_three(self, capsys):
        # anything that is not a keyword spec is read as a file path
        code, _out, err = run_cli(
            capsys,
            ["stats", "--coding", "free:2", "--weights", "bogus:x"],
        )
        assert code == 3
        assert err != ""

    def test_malformed_thread_env(self, capsys, monkeypatch):
        monkeypatch.setenv("HYPSTAT_THREADS", "many")
        code, _out, err = run_cli(
            capsys,
            ["scan-lattice", "--coding", "free:2", "--weights", "hom:a=1,b=0",
             "--tgrid", "1:2:1"],
        )
        assert code == 2
        assert "HYPSTAT_THREADS" in err

    def test_version_flag(self, capsys):
        code, out, _err = run_cli(capsys, ["--version"])
        assert code == 0
        assert hs.__version__ in out
