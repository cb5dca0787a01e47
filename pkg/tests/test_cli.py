import csv
import json
import os
import subprocess
import sys

import pytest

from cpflab.cli import EXIT_FAIL, EXIT_IO, EXIT_OK, EXIT_USAGE, main, snapshot_rows
from cpflab.config import ENV_VAR


def read_json(path):
    with open(path) as fh:
        return json.load(fh)


def test_verify_all_passes_and_writes_report(tmp_path):
    out = tmp_path / "report.json"
    code = main(["verify", "all", "--epsilon", "1e-2,5e-3", "--n-max", "4", "--out", str(out)])
    assert code == EXIT_OK
    report = read_json(out)
    assert report["schema_version"] == 1
    assert report["passed"] is True
    assert {c["suite"] for c in report["checks"]} == {"cr", "cpf", "fock", "gauge", "observables"}
    assert report["config"]["epsilon_list"] == [1e-2, 5e-3]
    assert os.listdir(tmp_path) == ["report.json"]


def test_observable_rows_have_fixed_schema(tmp_path):
    out = tmp_path / "obs.json"
    assert main(["verify", "observables", "--n-max", "1", "--beta", "-1", "--out", str(out)]) == EXIT_OK
    rows = read_json(out)["checks"]
    # 3 wavenumbers, 2 occupancies, 3 observables
    assert len(rows) == 18
    keys = {"suite", "observable", "n", "beta", "kappa", "epsilon", "value", "expected", "rel_error", "pass"}
    assert all(set(r) == keys for r in rows)
    assert all(r["beta"] == -1 for r in rows)


def test_gauge_csv_report(tmp_path):
    out = tmp_path / "gauge.csv"
    assert main(["verify", "gauge", "--beta", "+1", "--format", "csv", "--out", str(out)]) == EXIT_OK
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    pol = json.loads(rows[0]["polarization"])
    assert pol[0] == pytest.approx([2**-0.5, 0.0])
    assert pol[1][1] == pytest.approx(2**-0.5)


def test_reports_are_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert main(["verify", "fock", "--out", str(p)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_failing_check_gives_exit_one(tmp_path, monkeypatch):
    # an absurdly wide delta cannot meet the residual bounds
    monkeypatch.setenv(ENV_VAR, "")
    out = tmp_path / "r.json"
    assert main(["verify", "cpf", "--epsilon", "0.9,0.5", "--out", str(out)]) == EXIT_FAIL
    assert read_json(out)["passed"] is False


def test_usage_errors(tmp_path):
    assert main(["verify", "cr", "--epsilon", "1e-3,1e-2"]) == EXIT_USAGE
    assert main(["verify", "fock", "--n-max", "15"]) == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nothing"])
    assert exc.value.code == EXIT_USAGE


def test_bad_config_file_is_usage_error(tmp_path, monkeypatch):
    cfg = tmp_path / "defaults.json"
    cfg.write_text('{"not_a_key": 1}')
    monkeypatch.setenv(ENV_VAR, str(cfg))
    assert main(["verify", "fock"]) == EXIT_USAGE


def test_config_file_feeds_defaults(tmp_path, monkeypatch):
    cfg = tmp_path / "defaults.json"
    cfg.write_text('{"kappa": 0.5}')
    monkeypatch.setenv(ENV_VAR, str(cfg))
    out = tmp_path / "r.json"
    assert main(["verify", "fock", "--out", str(out)]) == EXIT_OK
    assert read_json(out)["config"]["kappa"] == 0.5


def test_unwritable_output_is_io_error(tmp_path):
    assert main(["verify", "fock", "--out", str(tmp_path / "missing" / "r.json")]) == EXIT_IO


def test_snapshot_grid(tmp_path):
    out = tmp_path / "snap.csv"
    assert main(["snapshot", "--grid", "32", "--mode-k", "1.0", "--t", "0.0", "--out", str(out)]) == EXIT_OK
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 32 * 32
    assert list(rows[0])[:4] == ["x1", "x2", "x3", "t"]
    # circular polarization: A3 and A0 vanish everywhere
    assert all(float(r["re_A3"]) == 0.0 and float(r["re_A0"]) == 0.0 for r in rows)


def test_snapshot_outside_window(tmp_path):
    assert main(["snapshot", "--extent", "50", "--out", str(tmp_path / "s.csv")]) == EXIT_USAGE
    assert not (tmp_path / "s.csv").exists()


def test_module_entry_point(tmp_path):
    out = tmp_path / "snap.json"
    proc = subprocess.run([sys.executable, "-m", "cpflab", "snapshot", "--grid", "4x3", "--format", "json",
                           "--out", str(out)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    data = read_json(out)
    assert data["grid"] == [4, 3] and len(data["rows"]) == 12


def test_snapshot_vacuum_is_zero():
    rows = snapshot_rows((6, 6), 1.0, 0.0, n=0)
    assert max(abs(v) for r in rows for k, v in r.items() if k.startswith(("re_", "im_"))) <= 1e-14


def test_mirrored_snapshots_reflect_in_x2():
    # parity: zeta is unchanged by (x2, beta) -> (-x2, -beta) while e2 = i beta / sqrt(2) flips sign
    kw = dict(grid=(5, 7), mode_k=1.0, t=0.3, x3=0.2, n=2, epsilon=0.2)
    plus = snapshot_rows(beta=1, xi=(1.0, 0.5), **kw)
    minus = snapshot_rows(beta=-1, xi=(1.0, -0.5), **kw)
    lookup = {(round(r["x1"], 12), round(-r["x2"], 12)): r for r in minus}
    for r in plus:
        m = lookup[(round(r["x1"], 12), round(r["x2"], 12))]
        for part in ("re", "im"):
            assert m[f"{part}_A1"] == pytest.approx(r[f"{part}_A1"], abs=1e-12)
            assert m[f"{part}_A2"] == pytest.approx(-r[f"{part}_A2"], abs=1e-12)
