"""Oracle verification suite.

Re-runs every analytic/numeric equivalence the library relies on and prints
one PASS/FAIL line per check.  Exit status 0 means all checks passed.  The
checks deliberately look functions up on their modules at call time, so a
perturbed implementation is caught rather than a captured reference.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from . import linalg, mcsim, measures, optimizer, qstate, scenarios

_VERIFY_OPT_CONFIG = optimizer.OptimizerConfig(grid_points_per_dim=21)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    message: str


def _rand_hermitian(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (a + a.conj().T)


def _rand_pure(rng, dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def _rand_state(rng, dim):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def _rand_bloch(rng):
    v = rng.normal(size=3)
    v /= np.linalg.norm(v)
    return v * rng.random() ** (1.0 / 3.0)


def _check_tracenorm_symmetry_triangle(rng):
    worst = 0.0
    for _ in range(200):
        a = _rand_hermitian(rng, 4)
        b = _rand_hermitian(rng, 4)
        worst = max(worst, abs(linalg.trace_norm(a) - linalg.trace_norm(-a)))
        excess = linalg.trace_norm(a + b) - linalg.trace_norm(a) - linalg.trace_norm(b)
        worst = max(worst, excess)
    return worst <= 1e-10, f"max_violation={worst:.3e}"


def _check_tracenorm_unitary_invariance(rng):
    worst = 0.0
    for _ in range(200):
        a = _rand_hermitian(rng, 4)
        u = linalg.hermitian_eigensystem(_rand_hermitian(rng, 4)).vectors
        worst = max(worst, abs(linalg.trace_norm(u @ a @ u.conj().T) - linalg.trace_norm(a)))
    return worst <= 1e-10, f"max_err={worst:.3e}"


def _check_eigensystem_reconstruction(rng):
    worst_rec = 0.0
    worst_gram = 0.0
    for k in range(200):
        dim = 2 if k % 2 else 4
        h = _rand_hermitian(rng, dim)
        es = linalg.hermitian_eigensystem(h)
        rec = es.vectors @ np.diag(es.values) @ es.vectors.conj().T
        worst_rec = max(worst_rec, float(np.max(np.abs(rec - h))))
        gram = es.vectors.conj().T @ es.vectors
        worst_gram = max(worst_gram, float(np.max(np.abs(gram - np.eye(dim)))))
    ok = worst_rec <= 1e-10 and worst_gram <= 1e-10
    return ok, f"max_reconstruction={worst_rec:.3e}, max_gram={worst_gram:.3e}"


def _check_ptrace_tensor_consistency(rng):
    worst = 0.0
    for _ in range(200):
        a = _rand_hermitian(rng, 2)
        b = _rand_hermitian(rng, 2)
        full = linalg.tensor_product(a, b)
        worst = max(worst, float(np.max(np.abs(
            linalg.partial_trace(full, "A") - b * np.trace(a)))))
        worst = max(worst, float(np.max(np.abs(
            linalg.partial_trace(full, "B") - a * np.trace(b)))))
    return worst <= 1e-12, f"max_err={worst:.3e}"


def _check_example_spectrum(rng):
    worst = 0.0
    for _ in range(20):
        theta = rng.uniform(0.0, np.pi / 2)
        phi = rng.uniform(0.0, np.pi / 2)
        pair = scenarios.build_example(theta, phi)
        values = linalg.hermitian_eigensystem(pair.rho_ab - pair.sigma_ab).values
        s = 0.5 * np.sqrt(3.0 - np.cos(2.0 * (theta - phi)))
        expected = np.array([-s, 0.0, 0.0, s])
        worst = max(worst, float(np.max(np.abs(values - expected))))
    return worst <= 1e-10, f"max_err={worst:.3e}"


def _check_bloch_tracenorm_identity(rng):
    worst = 0.0
    for _ in range(200):
        m = _rand_bloch(rng)
        n = _rand_bloch(rng)
        tn = linalg.trace_norm(qstate.bloch_to_density(m) - qstate.bloch_to_density(n))
        worst = max(worst, abs(tn - float(np.linalg.norm(m - n))))
    return worst <= 1e-10, f"max_err={worst:.3e}"


def _check_pure_tracenorm_identity(rng):
    worst = 0.0
    for k in range(200):
        dim = 2 if k % 2 else 4
        u = _rand_pure(rng, dim)
        v = _rand_pure(rng, dim)
        tn = linalg.trace_norm(qstate.projector(u) - qstate.projector(v))
        ident = 2.0 * np.sqrt(max(0.0, 1.0 - abs(np.vdot(u, v)) ** 2))
        worst = max(worst, abs(tn - ident))
    return worst <= 1e-10, f"max_err={worst:.3e}"


def _check_helstrom_complement(rng):
    worst = 0.0
    for _ in range(100):
        rho = _rand_state(rng, 2)
        sigma = _rand_state(rng, 2)
        total = measures.helstrom_error(rho, sigma) + measures.helstrom_success(rho, sigma)
        worst = max(worst, abs(total - 1.0))
    return worst == 0.0, f"max_deviation={worst:.3e}"


def _check_helstrom_example_states(rng):
    ket0 = np.array([1.0, 0.0], dtype=complex)
    ketp = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)
    err = measures.helstrom_error(qstate.projector(ket0), qstate.projector(ketp))
    expected = 0.5 - np.sqrt(2.0) / 4.0
    return abs(err - expected) <= 1e-12, f"error={err:.12f}, expected={expected:.12f}"


def _check_concurrence_schmidt_agreement(rng):
    fam = scenarios.family("case3")
    worst = 0.0
    for _ in range(100):
        lam = rng.uniform(0.05, 0.95)
        fixed = {"lam": lam, "mu": rng.uniform(0.05, 0.95)}
        free = {"theta": np.array([rng.uniform(0, np.pi / 2)]),
                "phi": np.array([rng.uniform(0, np.pi / 2)])}
        psi, _ = fam.statevectors_batch(fixed, free)
        worst = max(worst, abs(measures.concurrence_pure(psi[0])
                               - measures.schmidt_concurrence(lam)))
    return worst <= 1e-10, f"max_err={worst:.3e}"


def _check_success_probability_consistency(rng):
    worst = 0.0
    for _ in range(50):
        rho = _rand_state(rng, 4)
        sigma = _rand_state(rng, 4)
        mp = mcsim.projectors_for(rho, sigma)
        p = measures.success_probability(rho, sigma, mp.m0, mp.m1)
        worst = max(worst, abs(p - measures.helstrom_success(rho, sigma)))
    return worst <= 1e-10, f"max_err={worst:.3e}"


def _check_trace_distance_metric(rng):
    worst = 0.0
    for _ in range(100):
        a = _rand_state(rng, 2)
        b = _rand_state(rng, 2)
        c = _rand_state(rng, 2)
        dab = measures.trace_distance(a, b)
        worst = max(worst, abs(dab - measures.trace_distance(b, a)))
        worst = max(worst, measures.trace_distance(a, a))
        worst = max(worst, measures.trace_distance(a, c) - dab - measures.trace_distance(b, c))
    return worst <= 1e-10, f"max_violation={worst:.3e}"


def _check_example_tracenorm_closed_form(rng):
    worst = 0.0
    for _ in range(50):
        theta = rng.uniform(0, np.pi / 2)
        phi = rng.uniform(0, np.pi / 2)
        pair = scenarios.build_example(theta, phi)
        tn = linalg.trace_norm(pair.rho_ab - pair.sigma_ab)
        worst = max(worst, abs(tn - scenarios.example_joint_trace_norm(theta - phi)))
    return worst <= 1e-10, f"max_err={worst:.3e}"


def _check_case1_objective_formula(rng):
    worst = 0.0
    for _ in range(50):
        theta, phi, chi, delta = rng.uniform(0, np.pi / 2, size=4)
        pair = scenarios.build_case1(theta, phi, chi, delta)
        obj = 0.5 - 0.25 * linalg.trace_norm(pair.rho_ab - pair.sigma_ab)
        worst = max(worst, abs(obj - scenarios.case1_objective_closed_form(
            theta - phi, chi, delta)))
    return worst <= 1e-10, f"max_err={worst:.3e}"


def _check_case3_objective_formula(rng):
    worst = 0.0
    for _ in range(50):
        theta, phi = rng.uniform(0, np.pi / 2, size=2)
        lam, mu = rng.uniform(0.05, 0.95, size=2)
        pair = scenarios.build_case3(theta, phi, lam, mu)
        obj = 0.5 - 0.25 * linalg.trace_norm(pair.rho_ab - pair.sigma_ab)
        worst = max(worst, abs(obj - scenarios.case3_objective_closed_form(
            theta - phi, lam, mu)))
    return worst <= 1e-10, f"max_err={worst:.3e}"


def _check_case4_povm_formula(rng):
    worst = 0.0
    for _ in range(500):
        lam, mu = rng.uniform(0.02, 0.98, size=2)
        x = rng.uniform(0, np.pi / 2)
        y = rng.uniform(0, 2 * np.pi)
        pair = scenarios.build_case4(rng.uniform(0, np.pi / 2), lam, mu, x, y)
        worst = max(worst, abs(scenarios.case4_povm_error(lam, mu, x, y)
                               - measures.helstrom_error(pair.rho_b, pair.sigma_b)))
    return worst <= 1e-10, f"max_err={worst:.3e}"


def _check_case4_theta_invariance(rng):
    worst = 0.0
    for _ in range(10):
        lam, mu = rng.uniform(0.05, 0.95, size=2)
        x = rng.uniform(0, np.pi / 2)
        y = rng.uniform(0, 2 * np.pi)
        values = []
        for theta in np.linspace(0.0, np.pi / 2, 10):
            pair = scenarios.build_case4(theta, lam, mu, x, y)
            values.append(0.5 - 0.25 * linalg.trace_norm(pair.rho_ab - pair.sigma_ab))
        worst = max(worst, float(np.ptp(values)))
    return worst <= 1e-10, f"max_spread={worst:.3e}"


def _check_objective_paths_agree(rng):
    """Fast optimizer objective equals the build-then-trace-norm route."""
    worst = 0.0
    cases = [("example", {}), ("case1", {"chi": 0.3, "delta": 1.1}),
             ("case2", {"m": 0.7, "n": -0.2, "p": 0.4}),
             ("case3", {"lam": 0.3, "mu": 0.6}),
             ("case4", {"lam": 0.25, "mu": 0.33, "x": 0.8, "y": 2.5}),
             ("case4-product", {"lam": 0.25, "mu": 0.33, "x": 0.8, "y": 2.5})]
    for scenario_id, fixed in cases:
        params = scenarios.make_params(scenario_id, **fixed)
        ev = optimizer._Evaluator(params, optimizer.ConstraintSet(d=1.0))
        fam = scenarios.family(scenario_id)
        for _ in range(10):
            x = np.array([rng.uniform(*fam.domains[n]) for n in fam.free_names])
            pair = scenarios.build_point(params, ev.point_dict(x))
            direct = 0.5 - 0.25 * linalg.trace_norm(pair.rho_ab - pair.sigma_ab)
            worst = max(worst, abs(ev.objective(x) - direct))
    return worst <= 1e-10, f"max_err={worst:.3e}"


def _check_optimizer_example_oracle(rng):
    worst = 0.0
    for d in (0.0, 0.15, 0.35, 0.6, 0.85):
        result = optimizer.optimize(scenarios.make_params("example"),
                                    optimizer.ConstraintSet(d=d), _VERIFY_OPT_CONFIG)
        worst = max(worst, abs(result.p_npovm - scenarios.analytic_example_error(d)))
    return worst <= 1e-4, f"max_err={worst:.3e}"


def _check_optimizer_case1_oracle(rng):
    worst = 0.0
    for _ in range(8):
        d = rng.uniform(0.0, 0.98)
        chi, delta = rng.uniform(0, np.pi / 2, size=2)
        result = optimizer.optimize(scenarios.make_params("case1", chi=chi, delta=delta),
                                    optimizer.ConstraintSet(d=d), _VERIFY_OPT_CONFIG)
        worst = max(worst, abs(result.p_npovm - scenarios.analytic_case1_error(d, chi, delta)))
    special = optimizer.optimize(scenarios.make_params("case1", chi=0.0, delta=np.pi / 4),
                                 optimizer.ConstraintSet(d=0.37), _VERIFY_OPT_CONFIG)
    special_err = abs(special.p_npovm - scenarios.analytic_example_error(0.37))
    ok = worst <= 1e-4 and special_err <= 1e-6
    return ok, f"max_err={worst:.3e}, special_case_err={special_err:.3e}"


def _check_optimizer_boundary_activity(rng):
    worst = 0.0
    for _ in range(5):
        d = rng.uniform(0.1, 0.9)
        result = optimizer.optimize(scenarios.make_params("example"),
                                    optimizer.ConstraintSet(d=d), _VERIFY_OPT_CONFIG)
        gap = abs(abs(np.sin(result.argmin["theta"] - result.argmin["phi"])) - d)
        worst = max(worst, gap)
    return worst <= 1e-5, f"max_boundary_gap={worst:.3e}"


def _check_optimizer_monotonicity(rng):
    params = scenarios.make_params("case1", chi=0.2, delta=0.9)
    values = [optimizer.optimize(params, optimizer.ConstraintSet(d=d),
                                 _VERIFY_OPT_CONFIG).p_npovm
              for d in (0.0, 0.2, 0.45, 0.7, 0.95)]
    worst = max((values[i + 1] - values[i] for i in range(len(values) - 1)), default=0.0)
    return worst <= 1e-6, f"max_increase={worst:.3e}"


def _check_case2_bound_sandwich(rng):
    d = 0.6
    worst_low = 0.0
    worst_high = 0.0
    for _ in range(20):
        m_plane, n_plane = scenarios.canonicalize_bloch_pair(_rand_bloch(rng), _rand_bloch(rng))
        params = scenarios.make_params("case2", m=m_plane[2], n=n_plane[2], p=n_plane[0])
        result = optimizer.optimize(params, optimizer.ConstraintSet(d=d), _VERIFY_OPT_CONFIG)
        lower = scenarios.case2_lower_bound(d, m_plane, n_plane)
        worst_low = max(worst_low, lower - result.p_npovm)
        worst_high = max(worst_high, result.p_npovm - result.p_povm)
    ok = worst_low <= 1e-6 and worst_high <= 1e-9
    return ok, f"max_below_bound={worst_low:.3e}, max_above_baseline={worst_high:.3e}"


def _check_projector_invariants(rng):
    worst = 0.0
    for _ in range(100):
        pair = scenarios.build_case3(rng.uniform(0, np.pi / 2), rng.uniform(0, np.pi / 2),
                                     rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95))
        mp = mcsim.helstrom_projectors(pair)
        eye = np.eye(4)
        worst = max(worst, float(np.max(np.abs(mp.m0 + mp.m1 - eye))))
        worst = max(worst, float(np.max(np.abs(mp.m0 @ mp.m0 - mp.m0))))
        worst = max(worst, float(np.max(np.abs(mp.m1 @ mp.m1 - mp.m1))))
        worst = max(worst, float(np.max(np.abs(mp.m0 @ mp.m1))))
    return worst <= 1e-10, f"max_violation={worst:.3e}"


def _check_projector_attains_optimum(rng):
    worst = 0.0
    for _ in range(50):
        pair = scenarios.build_case1(*rng.uniform(0, np.pi / 2, size=4))
        mp = mcsim.helstrom_projectors(pair)
        p = measures.success_probability(pair.rho_ab, pair.sigma_ab, mp.m0, mp.m1)
        worst = max(worst, abs(p - measures.helstrom_success(pair.rho_ab, pair.sigma_ab)))
    return worst <= 1e-10, f"max_err={worst:.3e}"


def _check_mc_edge_cases(rng):
    identical = scenarios.build_case1(0.4, 0.4, 0.7, 0.7)
    rep_same = mcsim.simulate(identical, 100_000, seed=7)
    ok_same = abs(rep_same.empirical_error - 0.5) <= 4 * rep_same.standard_error
    orthogonal = scenarios.build_case1(0.3, 0.9, 0.0, np.pi / 2)
    rep_orth = mcsim.simulate(orthogonal, 50_000, seed=11)
    ok_orth = rep_orth.errors == 0
    ok = ok_same and ok_orth
    return ok, (f"identical: err={rep_same.empirical_error:.4f}, "
                f"orthogonal: errors={rep_orth.errors}")


def _check_mc_zscore(rng):
    worst = 0.0
    pairs = [scenarios.build_example(0.65, 0.25),
             scenarios.build_case3(0.9, 0.4, 0.3, 0.7),
             scenarios.build_case2(0.8, 0.2, (0.0, 0.0, 0.7), (0.4, 0.0, -0.1))]
    for k, pair in enumerate(pairs):
        report = mcsim.simulate(pair, 100_000, seed=100 + k)
        worst = max(worst, abs(report.z_score))
    return worst <= 4.0, f"max_|z|={worst:.2f}"


def _check_simulate_determinism(rng):
    pair = scenarios.build_example(0.5, 0.1)
    a = mcsim.simulate(pair, 20_000, seed=42)
    b = mcsim.simulate(pair, 20_000, seed=42)
    return a == b, f"errors={a.errors} vs {b.errors}"


CHECKS = (
    ("tracenorm_symmetry_triangle", _check_tracenorm_symmetry_triangle),
    ("tracenorm_unitary_invariance", _check_tracenorm_unitary_invariance),
    ("eigensystem_reconstruction", _check_eigensystem_reconstruction),
    ("ptrace_tensor_consistency", _check_ptrace_tensor_consistency),
    ("example_joint_spectrum", _check_example_spectrum),
    ("bloch_tracenorm_identity", _check_bloch_tracenorm_identity),
    ("pure_state_tracenorm_identity", _check_pure_tracenorm_identity),
    ("helstrom_error_success_complement", _check_helstrom_complement),
    ("helstrom_example_states", _check_helstrom_example_states),
    ("trace_distance_metric_axioms", _check_trace_distance_metric),
    ("concurrence_schmidt_agreement", _check_concurrence_schmidt_agreement),
    ("success_probability_attains_optimum", _check_success_probability_consistency),
    ("example_tracenorm_closed_form", _check_example_tracenorm_closed_form),
    ("case1_objective_closed_form", _check_case1_objective_formula),
    ("case3_objective_closed_form", _check_case3_objective_formula),
    ("case4_povm_closed_form", _check_case4_povm_formula),
    ("case4_theta_invariance", _check_case4_theta_invariance),
    ("objective_paths_agree", _check_objective_paths_agree),
    ("optimizer_example_oracle", _check_optimizer_example_oracle),
    ("optimizer_case1_oracle", _check_optimizer_case1_oracle),
    ("optimizer_boundary_activity", _check_optimizer_boundary_activity),
    ("optimizer_monotonicity_in_d", _check_optimizer_monotonicity),
    ("case2_bound_sandwich", _check_case2_bound_sandwich),
    ("measurement_projector_invariants", _check_projector_invariants),
    ("measurement_attains_optimum", _check_projector_attains_optimum),
    ("mc_edge_cases", _check_mc_edge_cases),
    ("mc_zscore", _check_mc_zscore),
    ("mc_determinism", _check_simulate_determinism),
)


def run_checks(seed: int = 20240) -> list[CheckResult]:
    results = []
    for name, fn in CHECKS:
        rng = np.random.default_rng(seed)
        try:
            passed, message = fn(rng)
        except Exception as exc:  # a crashed check is a failed check
            passed, message = False, f"error={exc!r}"
        results.append(CheckResult(name=name, passed=bool(passed), message=message))
    return results


def write_report(results: list[CheckResult], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["check", "status", "message"])
        for r in results:
            writer.writerow([r.name, "PASS" if r.passed else "FAIL", r.message])


def run_verify(report_path=None, seed: int = 20240) -> int:
    """Run every check, print one line each, optionally write a CSV report."""
    results = run_checks(seed=seed)
    failures = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        if not r.passed:
            failures += 1
        print(f"{status} {r.name}: {r.message}")
    print(f"verify: {len(results)} checks, {failures} failures")
    if report_path is not None:
        write_report(results, report_path)
        print(f"report written to {report_path}")
    return 1 if failures else 0
