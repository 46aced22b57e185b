import json
import subprocess
import sys
from pathlib import Path

import pytest

from cyclodet.cli import (
    RunConfig,
    cmd_verify,
    exit_code_for,
    main,
    reports_to_csv,
    reports_to_json,
)
from cyclodet.verify import report_from_dict


def run_main(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestVerifyCommand:
    def test_small_range_json(self, capsys):
        code, out, _ = run_main(
            capsys, "verify", "--pmin", "5", "--pmax", "7", "--threads", "1"
        )
        assert code == 0
        reports = json.loads(out)
        assert [r["p"] for r in reports] == [5, 7]
        for r in reports:
            assert all(c["pass"] for c in r["checks"].values())
            assert set(r["dets"]) == {"S", "T", "SD", "C", "D"}

    def test_report_schema(self, capsys):
        code, out, _ = run_main(
            capsys, "verify", "--pmin", "5", "--pmax", "5", "--threads", "1",
            "--delta", "2",
        )
        assert code == 0
        (report,) = json.loads(out)
        assert report["delta"] == 2
        assert report["dets"]["T"] == "-4"
        assert report["dets"]["SD"] == "0"
        assert report["decomp"]["alpha"] == "0"
        assert report["class"]["h_pos"] == 1
        assert report["class"]["eps_t"] == "1"
        # rationals serialized as exact strings
        assert isinstance(report["dets"]["D"], list)
        # round-trips through the reader
        rebuilt = report_from_dict(report)
        assert rebuilt.p == 5

    def test_empty_range(self, capsys):
        code, out, _ = run_main(capsys, "verify", "--pmin", "4", "--pmax", "4")
        assert code == 0
        assert json.loads(out) == []

    def test_usage_error_reversed_range(self, capsys):
        code, _, err = run_main(capsys, "verify", "--pmin", "10", "--pmax", "5")
        assert code == 1
        assert "pmin" in err

    def test_bad_delta(self, capsys):
        code, _, err = run_main(
            capsys, "verify", "--pmin", "5", "--pmax", "5", "--delta", "abc"
        )
        assert code == 1

    def test_out_file_and_csv(self, capsys, tmp_path):
        out_path = tmp_path / "grid.csv"
        code, _, _ = run_main(
            capsys, "verify", "--pmin", "5", "--pmax", "7", "--threads", "1",
            "--format", "csv", "--out", str(out_path),
        )
        assert code == 0
        lines = out_path.read_text().strip().splitlines()
        header = lines[0].split(",")
        assert header[0] == "p"
        assert len(lines) == 3  # header + two primes
        assert "pass" in lines[1]

    def test_exit_code_mapping(self):
        good = [{"checks": {"a": {"status": "pass"}}}]
        bad = [{"checks": {"a": {"status": "pass"}, "b": {"status": "fail"}}}]
        skipped = [{"checks": {"a": {"status": "skipped"}}}]
        assert exit_code_for(good) == 0
        assert exit_code_for(bad) == 2
        assert exit_code_for(skipped) == 0


class TestCache:
    def test_cache_hit_is_byte_identical(self, capsys, tmp_path):
        cache = tmp_path / "cache"
        args = (
            "verify", "--pmin", "5", "--pmax", "5", "--threads", "1",
            "--cache-dir", str(cache),
        )
        code1, out1, _ = run_main(capsys, *args)
        files = list(cache.glob("*.json"))
        assert code1 == 0 and len(files) == 1
        code2, out2, _ = run_main(capsys, *args)
        assert code2 == 0
        assert out1 == out2

    def test_cache_env_var_default(self, capsys, tmp_path, monkeypatch):
        cache = tmp_path / "envcache"
        monkeypatch.setenv("CYCLODET_CACHE_DIR", str(cache))
        code, _, _ = run_main(capsys, "verify", "--pmin", "5", "--pmax", "5",
                              "--threads", "1")
        assert code == 0
        assert list(cache.glob("p5-*.json"))

    def test_cache_key_includes_delta_mode(self, capsys, tmp_path):
        cache = tmp_path / "cache"
        run_main(capsys, "verify", "--pmin", "5", "--pmax", "5", "--threads", "1",
                 "--cache-dir", str(cache))
        run_main(capsys, "verify", "--pmin", "5", "--pmax", "5", "--threads", "1",
                 "--delta", "3", "--cache-dir", str(cache))
        assert len(list(cache.glob("*.json"))) == 2


class TestDetCommand:
    def test_det_S7(self, capsys):
        code, out, _ = run_main(capsys, "det", "--family", "S", "--p", "7")
        assert code == 0
        assert "det[S(7)] = -4" in out

    def test_det_SD_vanishes(self, capsys):
        code, out, _ = run_main(
            capsys, "det", "--family", "SD", "--p", "5", "--delta", "2"
        )
        assert code == 0
        assert "= 0" in out

    def test_det_C3(self, capsys):
        code, out, _ = run_main(capsys, "det", "--family", "C", "--p", "3")
        assert code == 0
        assert "det[C(3)] = 1" in out

    def test_det_D7_with_decomposition(self, capsys):
        code, out, _ = run_main(capsys, "det", "--family", "D", "--p", "7")
        assert code == 0
        assert "quad: 7/2 + 7/2*g" in out

    def test_det_D5_quartic(self, capsys):
        code, out, _ = run_main(capsys, "det", "--family", "D", "--p", "5")
        assert code == 0
        assert "quartic:" in out and "delta_sign=1" in out

    def test_missing_delta(self, capsys):
        code, _, err = run_main(capsys, "det", "--family", "T", "--p", "5")
        assert code == 1 and "delta" in err

    def test_unwanted_delta(self, capsys):
        code, _, err = run_main(
            capsys, "det", "--family", "S", "--p", "7", "--delta", "2"
        )
        assert code == 1

    def test_residue_delta_rejected(self, capsys):
        code, _, err = run_main(
            capsys, "det", "--family", "T", "--p", "5", "--delta", "4"
        )
        assert code == 1 and "non-residue" in err

    def test_composite_p(self, capsys):
        code, _, err = run_main(capsys, "det", "--family", "S", "--p", "15")
        assert code == 1


class TestClassnoCommand:
    def test_negative_discriminant(self, capsys):
        code, out, _ = run_main(capsys, "classno", "--p", "23")
        assert code == 0
        assert "h(-23) = 3" in out

    def test_positive_discriminant(self, capsys):
        code, out, _ = run_main(capsys, "classno", "--p", "5")
        assert code == 0
        assert "h(5) = 1" in out
        assert "eps_5 = (1 + 1*sqrt(5))/2" in out

    def test_composite(self, capsys):
        code, _, err = run_main(capsys, "classno", "--p", "9")
        assert code == 1


class TestJsonHelpers:
    def test_round_trip(self, capsys):
        code, out, _ = run_main(
            capsys, "verify", "--pmin", "7", "--pmax", "7", "--threads", "1"
        )
        dicts = json.loads(out)
        assert reports_to_json(dicts) == out

    def test_csv_grid(self):
        dicts = [
            {"p": 5, "residue8": 5, "checks": {"x": {"status": "pass"}}},
            {"p": 7, "residue8": 7, "checks": {"y": {"status": "fail"}}},
        ]
        csv_text = reports_to_csv(dicts)
        lines = csv_text.strip().splitlines()
        assert lines[0] == "p,residue8,x,y"
        assert lines[1] == "5,5,pass,"
        assert lines[2] == "7,7,,fail"


class TestEntryPoint:
    def test_python_dash_m(self):
        proc = subprocess.run(
            [sys.executable, "-m", "cyclodet", "det", "--family", "S", "--p", "7"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "det[S(7)] = -4" in proc.stdout
