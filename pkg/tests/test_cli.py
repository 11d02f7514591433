import json
import os

from diffw.cli import EXIT_CONFIG, EXIT_FAIL, EXIT_IO, EXIT_OK, main


def read_json(path):
    with open(path) as fh:
        return json.load(fh)


def test_run_group_axioms_exits_clean(tmp_path, capsys):
    report = tmp_path / "axioms.json"
    code = main(["run", "--suite", "group-axioms", "--dim", "1", "--seed", "42",
                 "--report", str(report)])
    assert code == EXIT_OK
    data = read_json(report)
    assert data["all_pass"]
    assert len(data["checks"]) >= 4
    out = capsys.readouterr().out
    assert "[pass]" in out


def test_reports_are_byte_identical_for_fixed_seed(tmp_path):
    r1, r2 = tmp_path / "a.json", tmp_path / "b.json"
    main(["run", "--suite", "seminorms", "--seed", "7", "--report", str(r1)])
    main(["run", "--suite", "seminorms", "--seed", "7", "--report", str(r2)])
    assert r1.read_bytes() == r2.read_bytes()


def test_unknown_suite_is_a_config_error(tmp_path):
    assert main(["run", "--suite", "nonsense"]) == EXIT_CONFIG


def test_malformed_config_file(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text("{not json")
    assert main(["run", "--config", str(cfg)]) == EXIT_CONFIG


def test_unwritable_report_is_an_io_error(tmp_path):
    missing_dir = tmp_path / "does" / "not" / "exist" / "r.json"
    code = main(["run", "--suite", "group-axioms", "--report", str(missing_dir)])
    assert code == EXIT_IO


def test_csv_and_figures_are_emitted(tmp_path):
    report = tmp_path / "ce.json"
    figs = tmp_path / "figs"
    code = main(["run", "--suite", "counterexample", "--report", str(report),
                 "--csv", "--figures", str(figs)])
    assert code == EXIT_OK
    csv_path = tmp_path / "ce.csv"
    assert csv_path.exists()
    header = csv_path.read_text().splitlines()[0]
    assert header == "suite,name,property,residual,tolerance,pass"
    rendered = sorted(os.listdir(figs))
    assert "counterexample_residuals.png" in rendered
    assert "counterexample_values.png" in rendered


def test_counterexample_report_values(tmp_path):
    report = tmp_path / "ce.json"
    code = main(["counterexample", "--max-n", "20", "--report", str(report)])
    assert code == EXIT_OK
    data = read_json(report)
    values = [
        c["value"]
        for c in data["checks"]
        if c["name"].startswith("counterexample-n") and c["name"][-1].isdigit()
    ]
    assert len(values) == 20
    assert all(v >= 1.0 - 1e-9 for v in values)


def test_counterexample_max_n_filters(tmp_path):
    report = tmp_path / "ce.json"
    main(["counterexample", "--max-n", "5", "--report", str(report)])
    names = [c["name"] for c in read_json(report)["checks"]]
    assert "counterexample-n05" in names
    assert "counterexample-n06" not in names
    assert "counterexample-no-perturbation" in names


def test_evolve_subcommand(tmp_path):
    field = tmp_path / "field.json"
    field.write_text(json.dumps({"kind": "linear", "matrix": [[0.1, -0.4], [0.3, 0.2]]}))
    report = tmp_path / "ev.json"
    code = main(["evolve", "--field", str(field), "--steps", "200", "--report", str(report)])
    assert code == EXIT_OK
    data = read_json(report)
    assert data["knot_defect"] < 1e-6
    assert data["aux_ode_max_deviation"] < 1e-5
    assert data["steps"] == 200


def test_evolve_missing_field_file(tmp_path):
    assert main(["evolve", "--field", str(tmp_path / "nope.json")]) == EXIT_IO


def test_semidirect_verify_subcommand(tmp_path):
    report = tmp_path / "sd.json"
    code = main(["semidirect-verify", "--report", str(report)])
    assert code == EXIT_OK
    names = [c["name"] for c in read_json(report)["checks"]]
    assert "semidirect-associativity" in names
    assert "semidirect-inverse" in names


def test_config_file_supplies_defaults_and_flags_win(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"suite": "counterexample", "seed": 11}))
    r1 = tmp_path / "r1.json"
    code = main(["run", "--config", str(cfg), "--report", str(r1)])
    assert code == EXIT_OK
    assert read_json(r1)["suite"] == "counterexample"
    r2 = tmp_path / "r2.json"
    code = main(["run", "--config", str(cfg), "--suite", "group-axioms", "--report", str(r2)])
    assert code == EXIT_OK
    assert read_json(r2)["suite"] == "group-axioms"


def test_tolerance_override_applies_everywhere(tmp_path):
    report = tmp_path / "r.json"
    code = main(["run", "--suite", "group-axioms", "--tol", "1e-30", "--report", str(report)])
    data = read_json(report)
    assert all(c["tolerance"] == 1e-30 for c in data["checks"])
    # residuals of the identity laws are exactly zero, the rest are not
    assert code == EXIT_FAIL
