import subprocess
import sys

import numpy as np
import pytest

from subhelstrom import cli, figures, scenarios


def run_cli(args):
    return cli.main(list(args))


class TestFigureCommand:
    def test_fig1_values_and_format(self, tmp_path):
        out = tmp_path / "fig1.csv"
        assert run_cli(["figure", "--id", "fig1", "--resolution", "11",
                        "--out", str(out), "--no-plot"]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "d,p_npovm,p_povm,delta_p,slack_d,slack_e,feasible"
        assert len(lines) == 12
        first = lines[1].split(",")
        assert float(first[0]) == 0.0
        assert float(first[1]) == pytest.approx(0.146447, abs=1e-4)
        assert first[6] == "true"

    def test_fig1_monotone_decreasing(self, tmp_path):
        out = tmp_path / "fig1.csv"
        run_cli(["figure", "--id", "fig1", "--resolution", "21",
                 "--out", str(out), "--no-plot"])
        values = [float(line.split(",")[1]) for line in out.read_text().splitlines()[1:]]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_byte_identical_reruns(self, tmp_path):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        for path in (a, b):
            run_cli(["figure", "--id", "fig2", "--resolution", "7",
                     "--out", str(path), "--no-plot"])
        assert a.read_bytes() == b.read_bytes()

    def test_delta_column_recomputes_exactly(self, tmp_path):
        out = tmp_path / "fig2.csv"
        run_cli(["figure", "--id", "fig2", "--resolution", "9",
                 "--out", str(out), "--no-plot"])
        for line in out.read_text().splitlines()[1:]:
            cells = line.split(",")
            recomputed = figures.format_value(float(cells[2]) - float(cells[3]))
            assert recomputed == cells[4]

    def test_fig2_orthogonal_targets_row(self, tmp_path):
        out = tmp_path / "fig2.csv"
        run_cli(["figure", "--id", "fig2", "--resolution", "5",
                 "--out", str(out), "--no-plot"])
        rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
        corner = [r for r in rows
                  if float(r[0]) == 0.0 and float(r[1]) == pytest.approx(np.pi / 2)]
        assert len(corner) == 1
        assert float(corner[0][4]) == pytest.approx(0.0, abs=1e-6)

    def test_plot_rendered_next_to_csv(self, tmp_path):
        out = tmp_path / "fig1.csv"
        run_cli(["figure", "--id", "fig1", "--resolution", "7", "--out", str(out)])
        assert (tmp_path / "fig1.png").exists()

    def test_no_plot_skips_image(self, tmp_path):
        out = tmp_path / "fig1.csv"
        run_cli(["figure", "--id", "fig1", "--resolution", "7",
                 "--out", str(out), "--no-plot"])
        assert not (tmp_path / "fig1.png").exists()

    def test_fig3_drops_invalid_bloch_rows(self, tmp_path):
        out = tmp_path / "fig3.csv"
        run_cli(["figure", "--id", "fig3", "--resolution", "5",
                 "--out", str(out), "--no-plot"])
        rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
        assert rows
        for r in rows:
            assert np.hypot(float(r[2]), float(r[1])) <= 1.0 + 1e-12
        assert len(rows) < 125

    def test_fig4_report_mode_records_negative_slack(self, tmp_path):
        out = tmp_path / "fig4.csv"
        run_cli(["figure", "--id", "fig4", "--resolution", "5",
                 "--out", str(out), "--no-plot"])
        rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
        assert any(float(r[6]) < 0 for r in rows)
        assert all(r[7] == "true" for r in rows)
        assert all(float(r[4]) < 0 for r in rows)

    def test_fig5_all_rows_show_advantage(self, tmp_path):
        out = tmp_path / "fig5.csv"
        run_cli(["figure", "--id", "fig5", "--resolution", "9",
                 "--out", str(out), "--no-plot"])
        rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
        assert len(rows) == 81
        assert all(float(r[4]) < 0 for r in rows)

    def test_fig5_body_text_values_change_output(self, tmp_path):
        caption = tmp_path / "caption.csv"
        body = tmp_path / "body.csv"
        run_cli(["figure", "--id", "fig5", "--resolution", "5",
                 "--out", str(caption), "--no-plot"])
        run_cli(["figure", "--id", "fig5", "--resolution", "5",
                 "--out", str(body), "--no-plot", "--body-text-values"])
        assert caption.read_bytes() != body.read_bytes()

    def test_invalid_resolution_exits_2(self, tmp_path):
        assert run_cli(["figure", "--id", "fig1", "--resolution", "2",
                        "--out", str(tmp_path / "x.csv"), "--no-plot"]) == 2

    def test_unknown_figure_id_usage_error(self):
        with pytest.raises(SystemExit) as err:
            run_cli(["figure", "--id", "fig9"])
        assert err.value.code == 2


class TestOptimizeCommand:
    def test_prints_oracle_value(self, capsys):
        assert run_cli(["optimize", "--scenario", "example", "--d", "0.4",
                        "--grid-points", "21"]) == 0
        out = dict(line.split("=", 1) for line in capsys.readouterr().out.splitlines())
        assert float(out["p_npovm"]) == pytest.approx(
            scenarios.analytic_example_error(0.4), abs=1e-4)
        assert out["feasible"] == "true"

    def test_scenario_flags(self, capsys):
        assert run_cli(["optimize", "--scenario", "case1", "--chi", "0.2",
                        "--delta", "0.9", "--d", "0.5", "--grid-points", "21"]) == 0
        out = dict(line.split("=", 1) for line in capsys.readouterr().out.splitlines())
        assert float(out["p_npovm"]) == pytest.approx(
            scenarios.analytic_case1_error(0.5, 0.2, 0.9), abs=1e-4)

    def test_params_file_and_flag_override(self, tmp_path, capsys):
        config = tmp_path / "params.txt"
        config.write_text("chi = 0.9  # overridden below\ndelta = 0.9\n")
        assert run_cli(["optimize", "--scenario", "case1", "--chi", "0.2",
                        "--params", str(config), "--d", "0.5", "--grid-points", "21"]) == 0
        out = dict(line.split("=", 1) for line in capsys.readouterr().out.splitlines())
        assert float(out["p_npovm"]) == pytest.approx(
            scenarios.analytic_case1_error(0.5, 0.2, 0.9), abs=1e-4)

    def test_infeasible_is_config_error(self, capsys):
        code = run_cli(["optimize", "--scenario", "case3", "--lambda", "0.5",
                        "--mu", "0.5", "--d", "0.3", "--E", "0.1",
                        "--grid-points", "21"])
        assert code == 2

    def test_invalid_bound_exits_2(self):
        assert run_cli(["optimize", "--scenario", "example", "--d", "1.5"]) == 2

    def test_bad_params_file_exits_2(self, tmp_path):
        config = tmp_path / "params.txt"
        config.write_text("chi 0.2\n")
        assert run_cli(["optimize", "--scenario", "case1", "--params", str(config),
                        "--d", "0.4"]) == 2


class TestSimulateCommand:
    def test_deterministic_output(self, capsys):
        args = ["simulate", "--scenario", "example", "--theta", "0.5", "--phi", "0.1",
                "--trials", "20000", "--seed", "42"]
        assert run_cli(args) == 0
        first = capsys.readouterr().out
        assert run_cli(args) == 0
        assert capsys.readouterr().out == first

    def test_orthogonal_targets_zero_errors(self, capsys):
        assert run_cli(["simulate", "--scenario", "case1", "--chi", "0.0",
                        "--delta", str(np.pi / 2), "--theta", "0.3", "--phi", "0.9",
                        "--trials", "20000", "--seed", "7"]) == 0
        out = dict(line.split("=", 1) for line in capsys.readouterr().out.splitlines())
        assert out["errors"] == "0"

    def test_identical_targets_near_half(self, capsys):
        assert run_cli(["simulate", "--scenario", "case1", "--chi", "0.4",
                        "--delta", "0.4", "--trials", "50000", "--seed", "3"]) == 0
        out = dict(line.split("=", 1) for line in capsys.readouterr().out.splitlines())
        assert abs(float(out["empirical_error"]) - 0.5) <= 3 * float(out["standard_error"])

    def test_requires_trials(self):
        with pytest.raises(SystemExit) as err:
            run_cli(["simulate", "--scenario", "example"])
        assert err.value.code == 2


class TestVerifyCommand:
    def test_fresh_build_passes(self, capsys, tmp_path):
        report = tmp_path / "report.csv"
        assert run_cli(["verify", "--report", str(report)]) == 0
        out = capsys.readouterr().out
        assert "FAIL" not in out
        lines = report.read_text().splitlines()
        assert lines[0] == "check,status,message"
        assert all(",PASS," in line for line in lines[1:])
        assert any(line.startswith("example_joint_spectrum,") for line in lines[1:])

    def test_detects_injected_perturbation(self, capsys, monkeypatch):
        true_fn = scenarios.analytic_example_error
        monkeypatch.setattr(scenarios, "analytic_example_error",
                            lambda d: true_fn(d) + 1e-3)
        assert run_cli(["verify"]) == 1
        assert "FAIL optimizer_example_oracle" in capsys.readouterr().out


def test_module_entry_point(tmp_path):
    out = tmp_path / "fig1.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "subhelstrom", "figure", "--id", "fig1",
         "--resolution", "5", "--out", str(out), "--no-plot"],
        capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert out.exists()
