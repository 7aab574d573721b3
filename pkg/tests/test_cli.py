"""High-value CLI tests that verify the tool works for users."""

import csv
import json
import subprocess
import sys

import pytest

from rainbow_mantel.cli import run


def invoke(capsys, *args):
    code = run(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCLIFunctionality:
    """Test that the CLI actually works for users."""

    def test_cli_help_shows_all_commands(self):
        """Users can discover available commands."""
        result = subprocess.run(
            [sys.executable, "-m", "rainbow_mantel", "--help"],
            capture_output=True,
            text=True,
            timeout=30,
        )

        assert result.returncode == 0
        for command in ["construct", "check", "search", "lemmas", "certify", "bench"]:
            assert command in result.stdout, f"Missing {command} command"

    @pytest.mark.smoke
    def test_cli_can_be_imported_as_module(self):
        """CLI can be run as a Python module."""
        result = subprocess.run(
            [sys.executable, "-m", "rainbow_mantel", "construct", "--n", "20", "--block", "3"],
            capture_output=True,
            text=True,
            timeout=30,
        )

        assert "ImportError" not in result.stderr
        assert "ModuleNotFoundError" not in result.stderr
        assert result.returncode == 0
        assert json.loads(result.stdout)["edges"] == [94, 94, 99]

    def test_bad_option_value_exits_two(self):
        """Usage errors exit with status 2 and explain the problem."""
        result = subprocess.run(
            [sys.executable, "-m", "rainbow_mantel", "search", "--n", "3", "--mode", "magic"],
            capture_output=True,
            text=True,
            timeout=30,
        )

        assert result.returncode == 2
        assert "magic" in result.stderr


class TestConstructCommand:
    """construct prints the density report as JSON."""

    def test_small_construction(self, capsys):
        code, out, _ = invoke(capsys, "construct", "--n", "20", "--block", "3")
        data = json.loads(out)
        assert code == 0
        assert data["sizes"] == {"A": 14, "B": 3, "C": 3}
        assert data["predicted"] == [94.0, 99.0]
        assert data["rainbow_count"] == 0
        assert data["beats_quarter"] is False

    def test_default_block_is_near_tau(self, capsys):
        code, out, _ = invoke(capsys, "construct", "--n", "900")
        data = json.loads(out)
        assert code == 0
        assert data["block"] == 135
        assert data["min_edges"] == 206415
        assert data["beats_quarter"] is True

    def test_invalid_block_exits_two(self, capsys):
        code, out, err = invoke(capsys, "construct", "--n", "10", "--block", "5")
        assert code == 2
        assert out == ""
        assert "A empty" in err

    def test_blow_up_written_to_file(self, capsys, tmp_path):
        path = tmp_path / "blown.txt"
        code, out, _ = invoke(
            capsys, "construct", "--n", "7", "--block", "2", "--blow-up", "2", "--out", str(path)
        )
        data = json.loads(out)
        assert code == 0
        assert data["blow_up"]["n"] == 14
        assert path.read_text().startswith("n 14\n")


class TestCheckCommand:
    """check counts rainbow triangles in a triple file."""

    def test_rainbow_triangle_file(self, capsys, tmp_path):
        path = tmp_path / "t.txt"
        path.write_text("n 3\n1 0 1\n2 1 2\n3 0 2\n")
        code, out, _ = invoke(capsys, "check", str(path))
        data = json.loads(out)
        assert code == 0
        assert data["rainbow_count"] == 1
        assert data["witness"] == [0, 1, 2]

    def test_construction_file_is_rainbow_free(self, capsys, tmp_path):
        path = tmp_path / "c.txt"
        invoke(capsys, "construct", "--n", "20", "--block", "3", "--out", str(path))
        code, out, _ = invoke(capsys, "check", str(path))
        data = json.loads(out)
        assert code == 0
        assert data["rainbow_count"] == 0
        assert "witness" not in data
        assert data["edges"] == [94, 94, 99]

    def test_malformed_file_reports_line(self, capsys, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("n 3\n4 0 1\n")
        code, _, err = invoke(capsys, "check", str(path))
        assert code == 2
        assert "line 2" in err

    def test_missing_file_exits_two(self, capsys, tmp_path):
        code, _, err = invoke(capsys, "check", str(tmp_path / "nope.txt"))
        assert code == 2
        assert "Cannot read" in err

    def test_undecodable_file_exits_two(self, capsys, tmp_path):
        path = tmp_path / "binary.txt"
        path.write_bytes(b"n 3\n1 0 \xff\n")
        code, _, err = invoke(capsys, "check", str(path))
        assert code == 2
        assert "line 2" in err
        assert "Unexpected" not in err


class TestSearchCommand:
    """search computes R(n) and can write CSV."""

    def test_exhaustive_sweep(self, capsys):
        code, out, _ = invoke(capsys, "search", "--n", "2,3,4", "--mode", "exhaustive")
        data = json.loads(out)
        assert code == 0
        assert [r["value"] for r in data["results"]] == [1, 2, 4]
        assert all(r["exact"] for r in data["results"])
        assert data["run"]["subcommand"] == "search"

    def test_exhaustive_refuses_large_n(self, capsys):
        code, out, err = invoke(capsys, "search", "--n", "5", "--mode", "exhaustive")
        assert code == 2
        assert out == ""
        assert "--mode bnb" in err

    def test_bnb_csv(self, capsys, tmp_path):
        path = tmp_path / "r.csv"
        code, out, _ = invoke(
            capsys, "search", "--n", "3", "--mode", "bnb", "--threads", "2", "--csv", str(path)
        )
        assert code == 0
        assert json.loads(out)["value"] == 2
        rows = list(csv.reader(path.read_text().splitlines()))
        assert rows[0] == ["n", "value", "exact", "nodes", "seconds"]
        assert rows[1][:3] == ["3", "2", "true"]
        run_config = json.loads(out)["run"]
        assert run_config["output"] == str(path)
        assert run_config["format"] == "json"
        assert run_config["threads"] == 2

    def test_local_search_is_seeded(self, capsys):
        args = ("search", "--n", "8", "--mode", "local", "--iterations", "300", "--seed", "4")
        _, first, _ = invoke(capsys, *args)
        _, second, _ = invoke(capsys, *args)
        a, b = json.loads(first), json.loads(second)
        assert a["witness"] == b["witness"]
        assert a["exact"] is False
        assert a["run"]["seed"] == 4

    def test_seed_from_environment(self, capsys, monkeypatch):
        monkeypatch.setenv("RAINBOW_MANTEL_SEED", "99")
        code, out, _ = invoke(capsys, "search", "--n", "4", "--mode", "local", "--iterations", "10")
        assert code == 0
        assert json.loads(out)["run"]["seed"] == 99

    def test_bad_vertex_list(self, capsys):
        code, _, err = invoke(capsys, "search", "--n", "three")
        assert code == 2
        assert "--n" in err


class TestLemmasCommand:
    """lemmas runs the check suite."""

    def test_json_output_passes(self, capsys):
        code, out, _ = invoke(
            capsys, "lemmas", "--exhaustive-max", "3", "--samples", "5", "--format", "json"
        )
        data = json.loads(out)
        assert code == 0
        assert len(data["results"]) == 13
        assert all(r["passed"] for r in data["results"])

    def test_table_output(self, capsys):
        code, out, _ = invoke(capsys, "lemmas", "--exhaustive-max", "2", "--samples", "2")
        assert code == 0
        assert "Lemma checks" in out
        assert "seed" in out


class TestCertifyCommand:
    """certify prints the certificate JSON and a summary on stderr."""

    def test_resolution_below_minimum_is_usage_error(self, capsys):
        code, _, _ = invoke(capsys, "certify", "--resolution", "8")
        assert code == 2

    @pytest.mark.slow
    def test_certificate_written_and_complete(self, capsys, tmp_path):
        path = tmp_path / "cert.json"
        code, out, err = invoke(
            capsys, "certify", "--resolution", "64", "--chain-samples", "5000", "--json", str(path)
        )
        data = json.loads(out)
        assert code == 0
        assert data["complete"] is True
        assert data["final_d_bound"] == pytest.approx(0.48547, abs=1e-5)
        assert json.loads(path.read_text()) == data
        assert "Certificate complete" in err


class TestBenchCommand:
    """bench emits CSV."""

    def test_counting_rows(self, capsys):
        code, out, _ = invoke(capsys, "bench", "--sizes", "16,32", "--bnb-sizes", "")
        assert code == 0
        rows = list(csv.reader(out.splitlines()))
        assert rows[0] == ["kind", "n", "work", "seconds", "rate"]
        assert [r[:2] for r in rows[1:]] == [["count", "16"], ["count", "32"]]

    def test_bench_to_file(self, capsys, tmp_path):
        path = tmp_path / "bench.csv"
        code, out, _ = invoke(
            capsys, "bench", "--sizes", "", "--bnb-sizes", "3", "--out", str(path)
        )
        assert code == 0
        assert out == ""
        rows = list(csv.reader(path.read_text().splitlines()))
        assert rows[1][:2] == ["bnb", "3"]
