import json
from pathlib import Path

import pytest

from affprimes import cli

AP4_SYSTEM = {
    "d": 2,
    "t": 4,
    "forms": [
        {"coeffs": [1, 0], "const": 0},
        {"coeffs": [1, 1], "const": 0},
        {"coeffs": [1, 2], "const": 0},
        {"coeffs": [1, 3], "const": 0},
    ],
}


def run(tmp_path, command, cfg, extra=()):
    cfg_path = tmp_path / "config.json"
    cfg_path.write_text(json.dumps(cfg))
    out = tmp_path / "out"
    code = cli.main(
        [command, "--config", str(cfg_path), "--out", str(out), *extra]
    )
    report = json.loads((out / "report.json").read_text()) if (out / "report.json").exists() else None
    return code, report, out


def test_complexity_command(tmp_path):
    code, report, _ = run(tmp_path, "complexity", {"system": AP4_SYSTEM})
    assert code == 0
    assert report["result"]["overall"] == 2
    assert report["result"]["per_index"] == [2, 2, 2, 2]


def test_singular_series_command(tmp_path):
    cfg = {"system": AP4_SYSTEM, "min_prime": 5, "pmax": 10**6}
    code, report, _ = run(tmp_path, "singular-series", cfg)
    assert code == 0
    val = 0.75 * report["result"]["truncated_product"]
    assert abs(val - 0.4764) < 5e-5


def test_normalize_command(tmp_path):
    code, report, _ = run(tmp_path, "normalize", {"system": AP4_SYSTEM, "s": 2})
    assert code == 0
    assert report["result"]["is_normal_form"] is True
    assert report["result"]["lattice_equal"] is True


def test_compare_command_csv(tmp_path):
    cfg = {
        "system": {
            "d": 2,
            "t": 3,
            "forms": [
                {"coeffs": [1, 0], "const": 0},
                {"coeffs": [1, 1], "const": 0},
                {"coeffs": [1, 2], "const": 0},
            ],
        },
        "body": {
            "dim": 2,
            "halfspaces": [
                {"a": [-1, 0], "c": -1},
                {"a": [0, -1], "c": -1},
                {"a": [1, 2], "c": {"times_N": 1}},
            ],
        },
        "N": 3000,
        "pmax": 10**4,
    }
    code, report, out = run(tmp_path, "compare", cfg, extra=["--format", "csv"])
    assert code == 0
    assert 0.7 < report["result"]["ratio_integral"] < 1.3
    csv_text = (out / "report.csv").read_text()
    assert csv_text.splitlines()[0] == "N,empirical,pred_log,pred_int,ratio_log,ratio_int,seconds"


def test_nil_check_determinism(tmp_path):
    cfg = {"trials": 25, "seed": 42}
    code1, rep1, _ = run(tmp_path, "nil-check", cfg)
    (tmp_path / "config.json").unlink()
    code2, rep2, _ = run(tmp_path, "nil-check", cfg)
    assert code1 == code2 == 0
    assert rep1["result"] == rep2["result"]
    assert rep1["result"]["hk_success"] == 25
    assert rep1["result"]["hk_perturbed_failures"] == 25


def test_gowers_command(tmp_path):
    code, report, _ = run(tmp_path, "gowers", {"N": 16, "s": 1, "input": "delta"})
    assert code == 0
    assert report["result"]["norm"] == pytest.approx(16 ** (-3 / 4))


def test_mobius_corr_command(tmp_path):
    cfg = {
        "system": {"d": 1, "t": 1, "forms": [{"coeffs": [1], "const": 0}]},
        "body": {"dim": 1, "halfspaces": [{"a": [-1], "c": -1}], "N": 10000},
        "N": 10000,
    }
    code, report, _ = run(tmp_path, "mobius-corr", cfg)
    assert code == 0
    assert abs(report["result"]["normalized_correlation"]) < 0.02


def test_chowla_command(tmp_path):
    cfg = {"N": 500, "factors": [[1, 0], [0, 1], [1, 1], [1, 2]]}
    code, report, _ = run(tmp_path, "chowla", cfg)
    assert code == 0
    assert abs(report["result"]["value"]) < 0.2


def test_sieve_check_command(tmp_path):
    cfg = {"N": 3000, "gamma": 0.3, "w": 3.0, "b_list": [1, 5], "C": 20}
    code, report, _ = run(tmp_path, "sieve-check", cfg)
    assert code == 0
    res = report["result"]
    assert res["nu_min"] >= 0.5
    assert abs(res["measure"] - 1) < 0.1
    assert res["correlation"]["holds"]


def test_mn_corr_command(tmp_path):
    code, report, _ = run(tmp_path, "mn-corr", {"N": 20000, "kind": "phase", "alpha": 0.618})
    assert code == 0
    assert report["result"]["abs"] < 0.05


def test_malformed_json_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{oops")
    code = cli.main(["complexity", "--config", str(bad), "--out", str(tmp_path)])
    assert code == 1


def test_missing_key_exit_code(tmp_path):
    code, _, _ = run(tmp_path, "predict", {"system": AP4_SYSTEM})
    assert code == 1


def test_resource_guard_exit_code(tmp_path):
    cfg = {"N": 10**9, "kind": "phase"}
    code, _, _ = run(tmp_path, "mn-corr", cfg)
    assert code == 2


def test_flag_overrides_config(tmp_path):
    cfg = {"system": AP4_SYSTEM, "min_prime": 5, "pmax": 100}
    cfg_path = tmp_path / "c.json"
    cfg_path.write_text(json.dumps(cfg))
    out = tmp_path / "o"
    assert cli.main(
        ["singular-series", "--config", str(cfg_path), "--out", str(out), "--pmax", "1000"]
    ) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["result"]["pmax"] == 1000
    assert report["config"]["pmax"] == 1000


def test_report_payload_deterministic(tmp_path):
    cfg = {"system": AP4_SYSTEM, "pmax": 10**4}
    code1, rep1, _ = run(tmp_path, "singular-series", cfg)
    code2, rep2, _ = run(tmp_path, "singular-series", cfg)
    rep1.pop("timing")
    rep2.pop("timing")
    assert rep1 == rep2
