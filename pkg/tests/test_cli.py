import json
import subprocess
import sys
from pathlib import Path

import pytest

from dpverify import cli
from dpverify.report import CHECKS, check_prefix, verify_all

README = Path(__file__).resolve().parents[1] / "README.md"


def run_json(capsys, *argv):
    code = cli.run([*argv, "--format", "json"])
    return code, json.loads(capsys.readouterr().out)


# exit codes ------------------------------------------------------------------------

def test_catalog_list(capsys):
    code, data = run_json(capsys, "catalog", "list")
    assert code == cli.EXIT_OK
    assert len(data) == 22


def test_catalog_table(capsys):
    assert cli.run(["catalog"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 2 + 22


def test_tangent_s7(capsys):
    code, data = run_json(capsys, "tangent", "S7")
    assert code == 0
    assert data["schema"] == 1 and data["final_h1"] == 1 and data["pass"] is True


def test_unknown_entry(capsys):
    assert cli.run(["tangent", "S99"]) == cli.EXIT_USAGE
    err = capsys.readouterr().err
    assert "S99" in err and "S9'" in err and "P2" in err


def test_usage_errors(capsys):
    assert cli.run(["frobnicate"]) == cli.EXIT_USAGE
    assert cli.run(["family"]) == cli.EXIT_USAGE
    assert cli.run(["family", "--t", "one"]) == cli.EXIT_USAGE
    assert cli.run(["verify-all", "--jobs", "0"]) == cli.EXIT_USAGE
    capsys.readouterr()


def test_check_failure_exits_one(capsys, monkeypatch):
    monkeypatch.setattr(cli, "verify_cdd", lambda entry, led=None: False)
    code, data = run_json(capsys, "tangent", "S7")
    assert code == cli.EXIT_FAIL and data["pass"] is False


def test_help_exits_zero(capsys):
    assert cli.run(["--help"]) == 0
    capsys.readouterr()


def test_out_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    assert cli.run(["jacobian-check", "S4''", "--format", "json", "--out", str(target)]) == 0
    assert capsys.readouterr().out == ""
    data = json.loads(target.read_text())
    assert data["dim_kernel"] == 4 and data["pass"]


def test_entry_subcommands(capsys):
    code, data = run_json(capsys, "embed", "S9'")
    assert code == 0 and data["invariants"]["degree"] == 5
    code, data = run_json(capsys, "singular", "S9'")
    assert code == 0 and [p["type"] for p in data["points"]] == ["A4"]


def test_family_fiber(capsys):
    code, data = run_json(capsys, "family", "--t", "0")
    assert code == 0 and data["status"] == "singular"


def test_family_total_space_budget(capsys):
    code, data = run_json(capsys, "family", "--total-space", "--budget", "0")
    assert code == 0 and data["status"] == "skipped"


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "dpverify", "catalog", "hash"], capture_output=True, text=True)
    assert out.returncode == 0 and len(out.stdout.strip()) == 64


def test_cache_dir_flag(tmp_path):
    # a fresh process, since embeddings are memoized in this one
    out = subprocess.run([sys.executable, "-m", "dpverify", "embed", "P2", "--cache-dir", str(tmp_path)],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert any(p.suffix == ".json" for p in tmp_path.iterdir())


# reports ----------------------------------------------------------------------------

def _strip(report):
    data = report.to_json()
    data.pop("elapsed_ms")
    for c in data["checks"]:
        c.pop("elapsed_ms")
    return json.dumps(data, sort_keys=True)


def test_report_deterministic_across_jobs():
    entries = ["S4''", "S9'", "S3", "S7"]
    one = verify_all(jobs=1, entries=entries, family=False)
    two = verify_all(jobs=2, entries=entries, family=False)
    assert one.passed and two.passed
    assert _strip(one) == _strip(two)
    assert [c.id for c in one.checks][:2] == ["cubic-system:S4''", "embedding:S4''"]


def test_report_schema():
    rep = verify_all(entries=["S4''"], family=False)
    data = rep.to_json()
    assert set(data) == {"schema", "version", "catalog_hash", "checks", "pass", "elapsed_ms"}
    assert data["schema"] == 1
    ids = {c["id"] for c in data["checks"]}
    assert {"golden-ideal:S4''", "jacobian-kernel:S4''", "singularities:S4''"} <= ids
    kernel = next(c for c in data["checks"] if c["id"] == "jacobian-kernel:S4''")
    assert kernel["expected"] == kernel["computed"] == 4


def test_verify_all_rejects_zero_jobs():
    with pytest.raises(ValueError):
        verify_all(jobs=0)


def test_every_check_documented():
    text = README.read_text()
    for prefix in CHECKS:
        assert f"`{prefix}`" in text
    rep = verify_all(entries=["S9'"], family=False)
    assert all(check_prefix(c.id) in CHECKS for c in rep.checks)
