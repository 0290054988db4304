"""End-to-end tests for the command-line runner (in-process)."""

import json

import pytest

from dqwalk.cli import main

pytestmark = pytest.mark.filterwarnings("ignore::UserWarning")


def run(tmp_path, *argv, prefix="run"):
    out = tmp_path / prefix
    code = main([*argv, "--out", str(out)])
    return code, out


# --- spectrum ----------------------------------------------------------------


def test_spectrum_odd_cycle(tmp_path, capsys):
    code, out = run(tmp_path, "spectrum", "--n", "5", "--q", "0.25", "--no-plots")
    assert code == 0
    summary = (tmp_path / "run_summary.txt").read_text()
    assert "peripheral: {1}" in summary
    assert "eigenspace structure: PASS" in summary
    assert "orthogonality: PASS" in summary
    data = json.loads((tmp_path / "run_spectrum.json").read_text())
    assert len(data["peripheral"]) == 1
    assert data["peripheral"][0]["re"] == pytest.approx(1.0)
    assert 0 < data["interior_max_modulus"] < 1
    assert "peripheral: {1}" in capsys.readouterr().out


def test_spectrum_even_cycle_reports_both_eigenvalues(tmp_path):
    code, out = run(tmp_path, "spectrum", "--n", "4", "--q", "0.25", "--no-plots")
    assert code == 0
    summary = (tmp_path / "run_summary.txt").read_text()
    assert "peripheral: {1, -1}" in summary
    assert summary.count("eigen-conditions") == 2
    data = json.loads((tmp_path / "run_spectrum.json").read_text())
    assert len(data["peripheral"]) == 2


def test_spectrum_output_is_deterministic(tmp_path):
    for prefix in ("a", "b"):
        code, _ = run(tmp_path, "spectrum", "--n", "4", "--q", "0.3", "--no-plots",
                      prefix=prefix)
        assert code == 0
    assert (tmp_path / "a_spectrum.json").read_bytes() == (
        tmp_path / "b_spectrum.json"
    ).read_bytes()
    assert (tmp_path / "a_summary.txt").read_bytes() == (
        tmp_path / "b_summary.txt"
    ).read_bytes()


def test_spectrum_renders_figure_by_default(tmp_path):
    code, _ = run(tmp_path, "spectrum", "--n", "3", "--q", "0.5")
    assert code == 0
    assert (tmp_path / "run_spectrum.png").stat().st_size > 0


# --- evolve ------------------------------------------------------------------


def test_evolve_writes_trajectory_and_summary(tmp_path):
    code, _ = run(
        tmp_path, "evolve", "--n", "5", "--q", "0.2", "--steps", "10", "--no-plots"
    )
    assert code == 0
    lines = (tmp_path / "run_trajectory.csv").read_text().strip().split("\n")
    assert lines[0] == (
        "t,distance_to_limit,P_0,P_1,P_2,P_3,P_4,c_t,"
        "S_total,S_coin,S_walker,mutual_info"
    )
    assert len(lines) == 12  # header + t = 0..10
    summary = json.loads((tmp_path / "run_summary.json").read_text())
    assert summary["steps"] == 10
    assert summary["walk"]["N"] == 5
    assert "final_mutual_info" in summary
    assert "maximally mixed" in summary["limit_state_description"]
    assert "parity" not in summary  # odd cycle has no parity split


def test_evolve_even_cycle_summary_has_parity_block(tmp_path):
    code, _ = run(
        tmp_path, "evolve", "--n", "4", "--q", "0.2", "--steps", "20", "--no-plots"
    )
    assert code == 0
    summary = json.loads((tmp_path / "run_summary.json").read_text())
    assert set(summary["parity"]) == {"even_steps", "odd_steps"}
    assert "alternating sign operator" in summary["limit_state_description"]
    assert "c = 1" in summary["limit_state_description"]


def test_evolve_zero_steps(tmp_path):
    code, _ = run(tmp_path, "evolve", "--n", "3", "--q", "0.5", "--steps", "0",
                  "--no-plots")
    assert code == 0
    lines = (tmp_path / "run_trajectory.csv").read_text().strip().split("\n")
    assert len(lines) == 2


def test_evolve_json_table_format(tmp_path):
    code, _ = run(
        tmp_path, "evolve", "--n", "3", "--q", "0.5", "--steps", "4",
        "--format", "json", "--no-plots",
    )
    assert code == 0
    table = json.loads((tmp_path / "run_trajectory.json").read_text())
    assert table["columns"][:2] == ["t", "distance_to_limit"]
    assert len(table["rows"]) == 5
    assert len(table["rows"][0]) == len(table["columns"])


def test_evolve_runs_to_threshold_without_step_count(tmp_path):
    code, _ = run(tmp_path, "evolve", "--n", "5", "--q", "0.2",
                  "--epsilon", "1e-6", "--no-plots")
    assert code == 0
    summary = json.loads((tmp_path / "run_summary.json").read_text())
    assert summary["first_t_below"] is not None
    assert summary["final_distance"] < 1e-6
    assert summary["steps"] == summary["first_t_below"]  # early exit


def test_evolve_output_is_deterministic(tmp_path):
    for prefix in ("a", "b"):
        code, _ = run(tmp_path, "evolve", "--n", "4", "--q", "0.3", "--steps", "15",
                      "--no-plots", prefix=prefix)
        assert code == 0
    for suffix in ("_trajectory.csv", "_summary.json"):
        assert (tmp_path / f"a{suffix}").read_bytes() == (
            tmp_path / f"b{suffix}"
        ).read_bytes()


def test_evolve_renders_figures_by_default(tmp_path):
    code, _ = run(tmp_path, "evolve", "--n", "3", "--q", "0.5", "--steps", "5")
    assert code == 0
    assert (tmp_path / "run_convergence.png").stat().st_size > 0
    assert (tmp_path / "run_distributions.png").stat().st_size > 0


def test_step_cap_environment_variable(tmp_path, monkeypatch):
    monkeypatch.setenv("DQWALK_MAX_T", "7")
    code, _ = run(tmp_path, "evolve", "--n", "3", "--q", "0.5", "--steps", "50",
                  "--no-plots")
    assert code == 0
    summary = json.loads((tmp_path / "run_summary.json").read_text())
    assert summary["steps"] == 7


def test_step_cap_must_be_an_integer(tmp_path, monkeypatch):
    monkeypatch.setenv("DQWALK_MAX_T", "soon")
    code, _ = run(tmp_path, "evolve", "--n", "3", "--q", "0.5", "--steps", "5",
                  "--no-plots")
    assert code == 1


# --- configuration files -----------------------------------------------------


def test_config_file_drives_the_run(tmp_path):
    config = tmp_path / "walk.json"
    config.write_text(json.dumps({
        "mode": "evolve",
        "walk": {"N": 4, "q": 0.3, "coin": {"kind": "hadamard"},
                 "initial": {"kind": "node", "x": 1, "coin": "l"}},
        "steps": 6,
        "plots": False,
    }))
    code, _ = run(tmp_path, "evolve", "--config", str(config))
    assert code == 0
    summary = json.loads((tmp_path / "run_summary.json").read_text())
    assert summary["walk"]["N"] == 4
    assert summary["steps"] == 6
    assert "c = -1" in summary["limit_state_description"]  # node 1 has odd parity


def test_flags_override_config_file(tmp_path):
    config = tmp_path / "walk.json"
    config.write_text(json.dumps({
        "walk": {"N": 3, "q": 0.5, "coin": {"kind": "hadamard"}},
        "steps": 4,
        "plots": False,
    }))
    code, _ = run(tmp_path, "evolve", "--config", str(config), "--n", "5")
    assert code == 0
    summary = json.loads((tmp_path / "run_summary.json").read_text())
    assert summary["walk"]["N"] == 5
    assert summary["steps"] == 4  # untouched flag falls back to the file


def test_generic_coin_config(tmp_path):
    config = tmp_path / "walk.json"
    config.write_text(json.dumps({
        "walk": {"N": 5, "q": 0.4,
                 "coin": {"theta": 0.4, "phi1": 0.3, "phi2": 1.1}},
        "plots": False,
    }))
    code, _ = run(tmp_path, "spectrum", "--config", str(config))
    assert code == 0
    assert "theta=0.4" in (tmp_path / "run_summary.txt").read_text()


# --- error handling ----------------------------------------------------------


def test_boundary_decoherence_rate_exits_with_validation_code(tmp_path):
    code, _ = run(tmp_path, "evolve", "--n", "5", "--q", "0.0", "--no-plots")
    assert code == 1


def test_degenerate_coin_angle_exits_with_validation_code(tmp_path):
    config = tmp_path / "walk.json"
    config.write_text(json.dumps(
        {"walk": {"N": 5, "q": 0.2, "coin": {"theta": 0.0}}}
    ))
    code, _ = run(tmp_path, "spectrum", "--config", str(config), "--no-plots")
    assert code == 1


def test_unknown_mode_in_config_rejected(tmp_path):
    config = tmp_path / "walk.json"
    config.write_text(json.dumps({"mode": "optimize"}))
    code, _ = run(tmp_path, "spectrum", "--config", str(config), "--no-plots")
    assert code == 1


def test_missing_config_file(tmp_path):
    code, _ = run(tmp_path, "spectrum", "--config", str(tmp_path / "nope.json"),
                  "--no-plots")
    assert code == 1


def test_malformed_config_file(tmp_path):
    config = tmp_path / "walk.json"
    config.write_text("{not json")
    code, _ = run(tmp_path, "spectrum", "--config", str(config), "--no-plots")
    assert code == 1


def test_nonpositive_epsilon_rejected(tmp_path):
    code, _ = run(tmp_path, "evolve", "--n", "3", "--q", "0.5",
                  "--epsilon", "-1", "--no-plots")
    assert code == 1


def test_unknown_format_is_a_usage_error():
    with pytest.raises(SystemExit) as excinfo:
        main(["evolve", "--format", "xml"])
    assert excinfo.value.code == 1


def test_missing_subcommand_is_a_usage_error():
    with pytest.raises(SystemExit) as excinfo:
        main([])
    assert excinfo.value.code == 1


# --- verify-all --------------------------------------------------------------


def test_verify_all_restricted_configuration_passes(tmp_path, capsys):
    code, _ = run(tmp_path, "verify-all", "--n", "3", "--q", "0.3", "--no-plots")
    assert code == 0
    text = (tmp_path / "run_verify.txt").read_text()
    lines = text.strip().split("\n")
    assert lines[-1] == "ALL CRITERIA PASSED"
    assert len(lines) == 13  # twelve criteria plus the verdict
    assert sum(line.startswith("PASS criterion") for line in lines) == 12
    assert "criterion  5" in text and "skipped" in text  # no even cycle supplied
    assert "ALL CRITERIA PASSED" in capsys.readouterr().out


def test_verify_all_reports_failures_with_numerical_exit_code(tmp_path, monkeypatch):
    monkeypatch.setenv("DQWALK_MAX_T", "5")  # starves the convergence criteria
    code, _ = run(tmp_path, "verify-all", "--n", "5", "--q", "0.2", "--no-plots")
    assert code == 2
    text = (tmp_path / "run_verify.txt").read_text()
    assert "CRITERIA FAILED" in text
    assert "FAIL criterion  4" in text
