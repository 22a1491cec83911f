import csv
import json
import subprocess
import sys

import pytest

from hamming_shift.cli import EXIT_GUARD, EXIT_OK, EXIT_USAGE, EXIT_VERIFY, SCAN_COLUMNS, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_exact(tmp_path, capsys):
    code, out, _ = run(capsys, "analyze", "--alpha", "pat:(01)^8", "--n", "16", "--mod", "pow2", "--out", str(tmp_path))
    assert code == EXIT_OK
    assert "epsilon 3281/8192" in out
    report = json.loads((tmp_path / "shift_report.json").read_text())
    assert report["method"] == "exact" and report["light_to_heavy"] == "19813"
    assert report["tool_version"] and report["config"]["seed"] == 0
    lines = (tmp_path / "joint.csv").read_text().splitlines()
    assert lines[0].startswith("# {") and lines[1] == "x,y,count"
    blocks = json.loads((tmp_path / "blocks.json").read_text())
    assert blocks["m"] == 16


def test_analyze_zero_shift(capsys):
    code, out, _ = run(capsys, "analyze", "--alpha", "0x0", "--n", "8")
    assert code == EXIT_OK
    assert "epsilon 35/256" in out
    assert "light->heavy fraction 0" in out


def test_analyze_walkthrough(tmp_path, capsys):
    code, _, _ = run(capsys, "analyze", "--alpha", "rat:1,-1,3", "--n", "64", "--walkthrough", "--trials", "2000",
                     "--out", str(tmp_path))
    assert code == EXIT_OK
    doc = json.loads((tmp_path / "walkthrough.json").read_text())
    assert doc["path"] == "consolidated"
    assert doc["predicted_quadrant_floor_log"] <= doc["measured_log"]


def test_analyze_plot(tmp_path, capsys):
    code, _, _ = run(capsys, "analyze", "--alpha", "pat:(1100)^3", "--out", str(tmp_path), "--plot", "--format", "json")
    assert code == EXIT_OK
    assert (tmp_path / "joint.png").stat().st_size > 0
    assert json.loads((tmp_path / "joint.json").read_text())["width"] == 12


def test_analyze_sampled(capsys):
    code, out, _ = run(capsys, "analyze", "--alpha", "pat:(01)^8", "--sample", "--samples", "2000", "--seed", "3")
    assert code == EXIT_OK and "method  mc" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "--alpha", "pat:(01"],
        ["analyze", "--alpha", "pat:(01)^8", "--samples", "0"],
        ["sample", "--alpha", "5"],
        ["analyze", "--alpha", "0b11", "--mod", "pow2m1"],
        ["scan", "--family", "nope:1", "--n-grid", "8"],
        [],
    ],
)
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        raise SystemExit(main(argv))
    assert exc.value.code == EXIT_USAGE


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "--lemmas", "--max-L", "6", "--dp", "--max-n", "6", "--bounds")
    assert code == EXIT_OK
    assert out.count("[PASS]") == 3


def test_verify_failure_exit_code(monkeypatch, capsys):
    from hamming_shift import cli
    from hamming_shift.verify import SuiteResult

    def broken(_):
        r = SuiteResult("broken")
        r.check(False, "always")
        return r

    monkeypatch.setattr(cli, "verify_bounds", broken)
    code, out, _ = run(capsys, "verify", "--bounds")
    assert code == EXIT_VERIFY and "[FAIL]" in out


def test_guard_exit_code(monkeypatch, capsys):
    from hamming_shift import cli
    from hamming_shift.errors import TooWide

    def too_wide(*_):
        raise TooWide("too wide")

    monkeypatch.setattr(cli, "joint_distribution", too_wide)
    code, _, err = run(capsys, "analyze", "--alpha", "pat:(01)^4")
    assert code == EXIT_GUARD and "too wide" in err


def test_scan_csv(capsys):
    code, out, _ = run(capsys, "scan", "--family", "sparse:1-2", "--family", "blocks:n", "--n-grid", "16:64:16")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0].startswith("# ")
    rows = list(csv.DictReader(lines[1:]))
    assert list(rows[0]) == SCAN_COLUMNS
    assert [r["family"] for r in rows] == ["blocks"] * 4 + ["sparse"] * 8
    for k in ("1", "2"):
        fr = [float(r["lth_fraction"]) for r in rows if r["family"] == "sparse" and r["param"] == k]
        assert fr == sorted(fr, reverse=True)
    assert min(float(r["lth_fraction"]) for r in rows if r["family"] == "blocks") > 0.25


def test_scan_empty_grid(capsys):
    code, out, _ = run(capsys, "scan", "--family", "sparse:1", "--n-grid", "")
    assert code == EXIT_OK
    assert out.splitlines()[1:] == [",".join(SCAN_COLUMNS)]


def test_scan_plot(tmp_path, capsys):
    out = tmp_path / "scan.csv"
    code, _, _ = run(capsys, "scan", "--family", "periodic:2,4", "--n-grid", "8,12", "--out", str(out), "--plot")
    assert code == EXIT_OK and out.with_suffix(".png").exists()


def test_sample_replay_is_byte_identical(tmp_path):
    argv = [sys.executable, "-m", "hamming_shift.cli", "sample", "--alpha", "pat:(01)^16", "--n", "32",
            "--samples", "200000", "--seed", "7"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second
    doc = json.loads(first)
    assert doc["seed"] == 7 and doc["samples"] == 200000 and doc["config"]["alpha"] == "pat:(01)^16"
