import pytest

from diffw.errors import SuiteConfigError
from diffw.reporting import build_report, render_figures, write_csv, write_json
from diffw.suites import SUITES, SuiteConfig, run_suite

RECORD_KEYS = {"suite", "name", "property", "residual", "tolerance", "pass"}


def test_every_registered_suite_passes_by_default():
    records, ok = run_suite(SuiteConfig(suite="all", dim=1, seed=42))
    assert ok
    failed = [r["name"] for r in records if not r["pass"]]
    assert failed == []
    assert {r["suite"] for r in records} == set(SUITES)


def test_records_carry_the_reporting_schema():
    records, _ = run_suite(SuiteConfig(suite="group-axioms", dim=1, seed=1))
    for rec in records:
        assert RECORD_KEYS <= set(rec)
        assert isinstance(rec["residual"], float)
        assert isinstance(rec["pass"], bool)


def test_records_are_sorted_by_suite_and_name():
    records, _ = run_suite(SuiteConfig(suite="all", dim=1, seed=3))
    keys = [(r["suite"], r["name"]) for r in records]
    assert keys == sorted(keys)


def test_run_suite_is_deterministic_per_seed():
    a, _ = run_suite(SuiteConfig(suite="inversion", dim=1, seed=5))
    b, _ = run_suite(SuiteConfig(suite="inversion", dim=1, seed=5))
    assert a == b


def test_config_validation():
    with pytest.raises(SuiteConfigError):
        SuiteConfig(suite="unheard-of")
    with pytest.raises(SuiteConfigError):
        SuiteConfig(dim=5)


def test_report_round_trip(tmp_path):
    cfg = SuiteConfig(suite="counterexample", seed=2)
    records, ok = run_suite(cfg)
    report = build_report(cfg, records, ok)
    json_path = tmp_path / "r.json"
    write_json(report, str(json_path))
    write_csv(report, str(tmp_path / "r.csv"))
    figures = render_figures(report, str(tmp_path / "figs"))
    assert json_path.exists()
    assert (tmp_path / "r.csv").exists()
    assert len(figures) == 2  # residual chart plus the value curve
