"""
Tests for settings loading and the command-line verbs
"""

import json
from fractions import Fraction

import pandas as pd
import pytest

import cli.commands as commands
from cli.main import run
from cli.settings import load_settings


@pytest.fixture(autouse=True)
def isolated_cache(cache_path):
    return cache_path


def output_of(capsys):
    return json.loads(capsys.readouterr().out)


def test_settings_layering(tmp_path, monkeypatch):
    config = tmp_path / "settings.json"
    config.write_text(json.dumps({"degree_cutoff": 6, "max_workers": 2}), encoding="utf-8")
    monkeypatch.setenv("ORBIFROB_MAX_WORKERS", "3")
    settings = load_settings(str(config), {"seed": 7, "log_level": None})
    assert settings.degree_cutoff == 6
    assert settings.max_workers == 3
    assert settings.seed == 7
    assert settings.log_level == "WARNING"


def test_settings_reject_unknown_keys(tmp_path):
    config = tmp_path / "settings.json"
    config.write_text(json.dumps({"colour": "blue"}), encoding="utf-8")
    with pytest.raises(ValueError):
        load_settings(str(config))


def test_parse_helpers():
    assert commands.parse_orders("2,2,3") == (2, 2, 3)
    assert commands.parse_orders("") == ()
    assert commands.parse_assignment("a1=1/2,W=2") == {"a1": Fraction(1, 2), "W": 2}
    with pytest.raises(ValueError):
        commands.parse_degrees("2,2")
    with pytest.raises(ValueError):
        commands.parse_assignment("a1")


def test_classify_verb(capsys):
    assert run(["classify", "2", "3", "5"]) == 0
    payload = output_of(capsys)
    assert payload["family"] == "E"
    assert payload["max_degree"] is not None


def test_classify_non_polynomial_lists_witnesses(capsys):
    assert run(["classify", "2", "3", "7"]) == 0
    payload = output_of(capsys)
    assert payload["family"] == "none"
    assert len(payload["admissible_degrees"]) >= 3


def test_hurwitz_verb(capsys):
    assert run(["hurwitz", "-d", "2", "--profiles", "(2);(2)"]) == 0
    assert output_of(capsys)["value"] == "1/2"
    assert run(["hurwitz", "-d", "3", "--profiles", "(3);(3)", "--oracle"]) == 0
    payload = output_of(capsys)
    assert payload["value"] == "1/3"
    assert payload["method"] == "oracle"


def test_hurwitz_oracle_cap_exit_code(capsys):
    code = run(["hurwitz", "-d", "7", "--profiles", "(7);(7)", "--oracle"])
    assert code == 3
    assert json.loads(capsys.readouterr().err)["error"] == "resource-cap"


def test_cap_verb(capsys):
    assert run(["cap", "--order", "2"]) == 0
    assert output_of(capsys)["support_violations"] == []


def test_wdvv_check_verb(capsys):
    assert run(["wdvv-check", "--orbifold", "2,2,2", "--source", "reference"]) == 0
    payload = output_of(capsys)
    assert payload["all_zero"]
    assert payload["residuals"] == 0


def test_gw_potential_compare_reference(tmp_path):
    out = tmp_path / "potential.json"
    assert run(["-o", str(out), "gw-potential", "--orbifold", "2,2,2", "--exact", "--compare-reference"]) == 0
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert payload["matches_reference"]
    assert payload["orbifold"] == [2, 2, 2]


def test_u_spectrum_verb(capsys):
    assert run(["u-spectrum", "--degrees", "2,2,2", "--point", "a1=1,b1=2"]) == 0
    payload = output_of(capsys)
    assert len(payload["eigenvalues"]) == 5
    assert payload["matches_critical_values"]
    assert payload["trace_mismatch"] <= 1e-8


def test_seifert_verb(capsys):
    assert run(["seifert", "--K", "2", "--check"]) == 0
    payload = output_of(capsys)
    assert payload["K"] == 2
    assert payload["invariants"]["N"] == 1
    assert payload["checks"]["quadrature"]["max_relative_error"] < 1e-8


def test_unknown_verb_is_usage_error(capsys):
    assert run(["frobnicate"]) == 2
    assert json.loads(capsys.readouterr().err)["error"] == "usage"


def test_bad_orders_are_usage_errors(capsys):
    assert run(["gw-potential", "--orbifold", "2,x"]) == 2
    assert run(["classify", "1", "2"]) == 2


def test_bad_config_is_usage_error(tmp_path, capsys):
    config = tmp_path / "settings.json"
    config.write_text(json.dumps({"colour": "blue"}), encoding="utf-8")
    assert run(["--config", str(config), "classify", "2"]) == 2


def test_fixtures_report(tmp_path, monkeypatch, capsys):
    items = [("classify", "2,3,5", lambda: True), ("classify", "2,3,7", lambda: False)]
    monkeypatch.setattr(commands, "_corpus_items", lambda settings, with_mirror: items)
    report = tmp_path / "report.csv"
    assert run(["fixtures", "--report", str(report)]) == 1
    payload = output_of(capsys)
    assert payload["total"] == 2
    assert payload["failed"] == 1
    frame = pd.read_csv(report)
    assert list(frame["passed"]) == [True, False]


def test_eigen_tolerance_reaches_spectrum(tmp_path, monkeypatch, capsys):
    config = tmp_path / "settings.json"
    config.write_text(json.dumps({"eigen_tol": 1e-11}), encoding="utf-8")
    seen = {}
    original = commands.u_operator_spectrum

    def recording(point, seed, eigen_tol):
        seen["eigen_tol"] = eigen_tol
        return original(point, seed, eigen_tol)

    monkeypatch.setattr(commands, "u_operator_spectrum", recording)
    assert run(["--config", str(config), "u-spectrum", "--degrees", "2,2,2", "--point", "a1=1,b1=2"]) == 0
    assert seen["eigen_tol"] == 1e-11
