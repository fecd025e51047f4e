import numpy as np
import pytest

from conftest import rand_bloch
from subhelstrom import measures, scenarios
from subhelstrom.optimizer import (
    ConstraintSet,
    InfeasibleError,
    OptimizerConfig,
    delta_p,
    feasible,
    optimize,
    sweep,
)

CFG = OptimizerConfig(grid_points_per_dim=21)


class TestOptimizeOracles:
    def test_example_matches_closed_form(self):
        result = optimize(scenarios.make_params("example"), ConstraintSet(d=0.4), CFG)
        assert result.p_npovm == pytest.approx(scenarios.analytic_example_error(0.4), abs=1e-4)
        assert result.p_npovm == pytest.approx(0.119211, abs=1e-4)
        assert result.feasible

    def test_example_zero_budget_reduces_to_baseline(self):
        result = optimize(scenarios.make_params("example"), ConstraintSet(d=0.0), CFG)
        assert result.p_npovm == pytest.approx(0.146447, abs=1e-6)
        assert result.p_npovm == pytest.approx(result.p_povm, abs=1e-6)
        assert result.delta_p == pytest.approx(0.0, abs=1e-6)

    def test_case1_matches_closed_form(self):
        params = scenarios.make_params("case1", chi=0.2, delta=0.9)
        result = optimize(params, ConstraintSet(d=0.5), CFG)
        assert result.p_npovm == pytest.approx(
            scenarios.analytic_case1_error(0.5, 0.2, 0.9), abs=1e-4)

    def test_boundary_is_active_at_optimum(self):
        for d in (0.15, 0.4, 0.8):
            result = optimize(scenarios.make_params("example"), ConstraintSet(d=d), CFG)
            gap = result.argmin["theta"] - result.argmin["phi"]
            assert abs(np.sin(gap)) == pytest.approx(d, abs=1e-5)
            assert result.boundary_active["d"]

    def test_delta_p_is_exact_difference(self):
        result = optimize(scenarios.make_params("example"), ConstraintSet(d=0.3), CFG)
        assert result.delta_p == result.p_npovm - result.p_povm

    def test_deterministic(self):
        params = scenarios.make_params("case1", chi=0.3, delta=1.0)
        a = optimize(params, ConstraintSet(d=0.4), CFG)
        b = optimize(params, ConstraintSet(d=0.4), CFG)
        assert a == b


class TestFeasible:
    def test_example_on_diagonal(self):
        ok, slacks = feasible(scenarios.make_params("example"), {"theta": 0.7, "phi": 0.7},
                              ConstraintSet(d=0.25))
        assert ok
        assert slacks["d"] == pytest.approx(0.25, abs=1e-12)

    def test_case3_entanglement_violation(self):
        params = scenarios.make_params("case3", lam=0.5, mu=0.5)
        ok, slacks = feasible(params, {"theta": 0.0, "phi": 0.0},
                              ConstraintSet(d=0.3, e=0.1, e_mode="strict"))
        assert not ok
        assert slacks["e"] == pytest.approx(-0.9, abs=1e-12)
        with pytest.raises(InfeasibleError) as err:
            optimize(params, ConstraintSet(d=0.3, e=0.1, e_mode="strict"), CFG)
        assert err.value.violation == pytest.approx(0.9, abs=1e-12)

    def test_case3_report_mode_ignores_entanglement(self):
        params = scenarios.make_params("case3", lam=0.5, mu=0.5)
        ok, slacks = feasible(params, {"theta": 0.0, "phi": 0.0},
                              ConstraintSet(d=0.3, e=0.1, e_mode="report"))
        assert ok
        assert slacks["e"] == pytest.approx(-0.9, abs=1e-12)
        result = optimize(params, ConstraintSet(d=0.3, e=0.1, e_mode="report"), CFG)
        assert result.feasible
        assert result.constraint_slacks["e"] == pytest.approx(-0.9, abs=1e-12)

    def test_case4_boundary_budget(self):
        params = scenarios.make_params("case4", lam=0.25, mu=0.33, x=0.8, y=2.0)
        ok, slacks = feasible(params, {"theta": 0.3}, ConstraintSet(d=0.16))
        assert ok
        assert slacks["d"] == pytest.approx(0.0, abs=1e-12)
        result = optimize(params, ConstraintSet(d=0.16), CFG)
        assert result.boundary_active["d"]

    def test_case4_infeasible_budget(self):
        params = scenarios.make_params("case4", lam=0.25, mu=0.33, x=0.8, y=2.0)
        with pytest.raises(InfeasibleError) as err:
            optimize(params, ConstraintSet(d=0.1), CFG)
        assert err.value.violation == pytest.approx(0.06, abs=1e-9)


class TestDeltaP:
    def test_identical_targets_gain(self):
        params = scenarios.make_params("case1", chi=0.6, delta=0.6)
        value = delta_p(params, ConstraintSet(d=0.4), CFG)
        assert value == pytest.approx(-0.2, abs=1e-4)

    def test_orthogonal_targets_no_gain(self):
        params = scenarios.make_params("case1", chi=0.0, delta=np.pi / 2)
        value = delta_p(params, ConstraintSet(d=0.4), CFG)
        assert value == pytest.approx(0.0, abs=1e-6)

    def test_zero_budget_no_gain(self):
        value = delta_p(scenarios.make_params("example"), ConstraintSet(d=0.0), CFG)
        assert value == pytest.approx(0.0, abs=1e-6)


class TestProperties:
    def test_monotone_in_budget(self):
        params = scenarios.make_params("case1", chi=0.3, delta=1.1)
        values = [optimize(params, ConstraintSet(d=d), CFG).p_npovm
                  for d in (0.0, 0.2, 0.4, 0.6, 0.8, 0.99)]
        for lo, hi in zip(values[1:], values[:-1]):
            assert lo <= hi + 1e-6

    def test_monotone_in_entanglement_budget(self):
        params = scenarios.make_params("case3", lam=0.1, mu=0.15)
        cap = max(measures.schmidt_concurrence(0.1), measures.schmidt_concurrence(0.15))
        loose = optimize(params, ConstraintSet(d=0.3, e=0.9), CFG).p_npovm
        tight = optimize(params, ConstraintSet(d=0.3, e=cap + 0.01), CFG).p_npovm
        assert tight <= loose + 1e-6 and loose <= tight + 1e-6
        with pytest.raises(InfeasibleError):
            optimize(params, ConstraintSet(d=0.3, e=cap - 0.05), CFG)

    def test_never_beats_feasible_point_bound(self):
        rng = np.random.default_rng(131)
        for _ in range(10):
            params = scenarios.make_params("case1",
                                           chi=rng.uniform(0, np.pi / 2),
                                           delta=rng.uniform(0, np.pi / 2))
            result = optimize(params, ConstraintSet(d=rng.uniform(0, 1)), CFG)
            assert result.p_npovm <= result.p_povm + 1e-6

    def test_case2_sandwich(self):
        rng = np.random.default_rng(137)
        for _ in range(20):
            m, n = scenarios.canonicalize_bloch_pair(rand_bloch(rng), rand_bloch(rng))
            params = scenarios.make_params("case2", m=m[2], n=n[2], p=n[0])
            result = optimize(params, ConstraintSet(d=0.6), CFG)
            assert scenarios.case2_lower_bound(0.6, m, n) - 1e-6 <= result.p_npovm
            assert result.p_npovm <= result.p_povm + 1e-9


class TestSweep:
    def test_single_point_matches_optimize(self):
        params = scenarios.make_params("case1", chi=0.2, delta=0.8)
        table = sweep({"d": [0.4]}, params, ConstraintSet(d=0.0), CFG)
        direct = optimize(params, ConstraintSet(d=0.4), CFG)
        assert table.row_count == 1
        assert table.rows[0] == direct

    def test_row_count_and_order(self):
        params = scenarios.make_params("case1")
        table = sweep({"chi": [0.1, 0.2], "delta": [0.3, 0.4, 0.5]},
                      params, ConstraintSet(d=0.4), CFG)
        assert table.row_count == 6
        expected = [(c, d) for c in (0.1, 0.2) for d in (0.3, 0.4, 0.5)]
        assert [(p["chi"], p["delta"]) for p in table.points] == expected

    def test_constraint_axis(self):
        params = scenarios.make_params("example")
        table = sweep({"d": [0.0, 0.3, 0.6]}, params, ConstraintSet(d=0.0), CFG)
        values = [row.p_npovm for row in table.rows]
        assert values[0] > values[1] > values[2]

    def test_infeasible_points_are_rows(self):
        params = scenarios.make_params("case4", lam=0.25, mu=0.33, x=0.5, y=1.0)
        table = sweep({"d": [0.05, 0.5]}, params, ConstraintSet(d=1.0), CFG)
        assert not table.rows[0].feasible
        assert np.isnan(table.rows[0].p_npovm)
        assert table.rows[1].feasible

    def test_cap_enforced(self):
        params = scenarios.make_params("example")
        with pytest.raises(ValueError):
            sweep({"d": np.linspace(0, 0.9, 11)}, params, ConstraintSet(d=0.0), CFG,
                  max_points=10)

    def test_unknown_axis_rejected(self):
        params = scenarios.make_params("example")
        with pytest.raises(ValueError):
            sweep({"chi": [0.1]}, params, ConstraintSet(d=0.0), CFG)


class TestConfigValidation:
    def test_constraint_ranges(self):
        with pytest.raises(ValueError):
            ConstraintSet(d=1.5)
        with pytest.raises(ValueError):
            ConstraintSet(d=0.5, e=-0.1)
        with pytest.raises(ValueError):
            ConstraintSet(d=0.5, e_mode="loose")

    def test_config_ranges(self):
        with pytest.raises(ValueError):
            OptimizerConfig(grid_points_per_dim=2)
        with pytest.raises(ValueError):
            OptimizerConfig(refine_tolerance=0.01)
        with pytest.raises(ValueError):
            OptimizerConfig(max_refine_iterations=0)
        with pytest.raises(ValueError):
            OptimizerConfig(constraint_slack=0.0)
