"""Joint-state families for constrained binary discrimination, plus closed forms.

Each family extends a fixed pair of single-qubit targets (the states to be
discriminated) to a pair of two-qubit joint states whose auxiliary factor
carries free parameters.  The closed-form expressions collected at the end
serve as independent analytic oracles for the numeric optimization path.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import linalg, measures, qstate

SCENARIO_IDS = ("example", "case1", "case2", "case3", "case4", "case4-product")

_HALF_PI = 0.5 * np.pi
_KET0 = np.array([1.0, 0.0], dtype=complex)
_KET1 = np.array([0.0, 1.0], dtype=complex)
_KETPLUS = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)


class DegenerateInputWarning(UserWarning):
    """A permitted but degenerate input (trivial or identical-target regime)."""


@dataclass(frozen=True)
class JointStatePair:
    """A pair of two-qubit extensions together with their derived marginals."""

    scenario_id: str
    rho_ab: np.ndarray
    sigma_ab: np.ndarray
    rho_a: np.ndarray
    sigma_a: np.ndarray
    rho_b: np.ndarray
    sigma_b: np.ndarray


def _pair(scenario_id: str, rho_ab: np.ndarray, sigma_ab: np.ndarray) -> JointStatePair:
    return JointStatePair(
        scenario_id=scenario_id,
        rho_ab=rho_ab,
        sigma_ab=sigma_ab,
        rho_a=linalg.partial_trace(rho_ab, "B"),
        sigma_a=linalg.partial_trace(sigma_ab, "B"),
        rho_b=linalg.partial_trace(rho_ab, "A"),
        sigma_b=linalg.partial_trace(sigma_ab, "A"),
    )


def _check_schmidt(value: float, name: str) -> float:
    v = float(value)
    if not 0.0 < v < 1.0:
        raise ValueError(f"{name} must lie strictly inside (0, 1), got {value}")
    return v


def _check_bloch(vec, name: str) -> np.ndarray:
    v = np.asarray(vec, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"{name} must have 3 components, got shape {v.shape}")
    nrm = float(np.linalg.norm(v))
    if nrm > 1.0 + qstate.BLOCH_NORM_TOL:
        raise ValueError(f"{name} has Bloch norm {nrm:.12f} > 1")
    return v


# ---------------------------------------------------------------------------
# Joint-state constructors
# ---------------------------------------------------------------------------

def build_example(theta: float, phi: float) -> JointStatePair:
    """Product extensions of the fixed targets |0><0| and |+><+|."""
    rho_ab = linalg.tensor_product(qstate.projector(qstate.pure_from_angle(theta)),
                                   qstate.projector(_KET0))
    sigma_ab = linalg.tensor_product(qstate.projector(qstate.pure_from_angle(phi)),
                                     qstate.projector(_KETPLUS))
    return _pair("example", rho_ab, sigma_ab)


def build_case1(theta: float, phi: float, chi: float, delta: float) -> JointStatePair:
    """Product extensions of two arbitrary real pure targets at angles chi, delta."""
    rho_ab = linalg.tensor_product(qstate.projector(qstate.pure_from_angle(theta)),
                                   qstate.projector(qstate.pure_from_angle(chi)))
    sigma_ab = linalg.tensor_product(qstate.projector(qstate.pure_from_angle(phi)),
                                     qstate.projector(qstate.pure_from_angle(delta)))
    return _pair("case1", rho_ab, sigma_ab)


def build_case2(theta: float, phi: float, m, n) -> JointStatePair:
    """Product extensions of two arbitrary (possibly mixed) Bloch-vector targets."""
    mv = _check_bloch(m, "m")
    nv = _check_bloch(n, "n")
    rho_ab = linalg.tensor_product(qstate.projector(qstate.pure_from_angle(theta)),
                                   qstate.bloch_to_density(mv))
    sigma_ab = linalg.tensor_product(qstate.projector(qstate.pure_from_angle(phi)),
                                     qstate.bloch_to_density(nv))
    return _pair("case2", rho_ab, sigma_ab)


def build_case3(theta: float, phi: float, lam: float, mu: float) -> JointStatePair:
    """Entangled extensions of the incoherent targets diag(lam, 1-lam), diag(mu, 1-mu)."""
    lam = _check_schmidt(lam, "lam")
    mu = _check_schmidt(mu, "mu")
    psi = (np.sqrt(lam) * np.kron(qstate.pure_from_angle(theta), _KET0)
           + np.sqrt(1.0 - lam) * np.kron(qstate.orthogonal_complement(theta), _KET1))
    phi_v = (np.sqrt(mu) * np.kron(qstate.pure_from_angle(phi), _KET0)
             + np.sqrt(1.0 - mu) * np.kron(qstate.orthogonal_complement(phi), _KET1))
    return _pair("case3", qstate.projector(psi), qstate.projector(phi_v))


def build_case4(theta: float, lam: float, mu: float, x: float, y: float) -> JointStatePair:
    """Entangled extensions sharing one auxiliary basis, second target in a rotated basis."""
    lam = _check_schmidt(lam, "lam")
    mu = _check_schmidt(mu, "mu")
    psi_a = qstate.pure_from_angle(theta)
    psi_a_perp = qstate.orthogonal_complement(theta)
    zero_p, one_p = qstate.primed_basis(x, y)
    psi = (np.sqrt(lam) * np.kron(psi_a, _KET0)
           + np.sqrt(1.0 - lam) * np.kron(psi_a_perp, _KET1))
    phi_v = (np.sqrt(mu) * np.kron(psi_a, zero_p)
             + np.sqrt(1.0 - mu) * np.kron(psi_a_perp, one_p))
    return _pair("case4", qstate.projector(psi), qstate.projector(phi_v))


def build_case4_product(theta: float, phi: float, lam: float, mu: float,
                        x: float, y: float) -> JointStatePair:
    """Product extensions of the same targets as build_case4 (no entanglement)."""
    lam = _check_schmidt(lam, "lam")
    mu = _check_schmidt(mu, "mu")
    rho_b = lam * qstate.projector(_KET0) + (1.0 - lam) * qstate.projector(_KET1)
    zero_p, one_p = qstate.primed_basis(x, y)
    sigma_b = mu * qstate.projector(zero_p) + (1.0 - mu) * qstate.projector(one_p)
    rho_ab = linalg.tensor_product(qstate.projector(qstate.pure_from_angle(theta)), rho_b)
    sigma_ab = linalg.tensor_product(qstate.projector(qstate.pure_from_angle(phi)), sigma_b)
    return _pair("case4-product", rho_ab, sigma_ab)


# ---------------------------------------------------------------------------
# Closed-form oracles
# ---------------------------------------------------------------------------

def _check_unit_interval(d: float, name: str = "d") -> float:
    v = float(d)
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {d}")
    return v


def analytic_example_error(d: float) -> float:
    """Optimal constrained error for the |0>/|+> product family: (1 - sqrt((1+d^2)/2)) / 2."""
    v = _check_unit_interval(d)
    if v >= 1.0 - 1e-12:
        warnings.warn("d = 1 makes the discrimination task trivial", DegenerateInputWarning,
                      stacklevel=2)
    return 0.5 * (1.0 - np.sqrt((1.0 + v * v) / 2.0))


def analytic_case1_error(d: float, chi: float, delta: float) -> float:
    """Optimal constrained error for arbitrary pure targets at angles chi, delta."""
    v = _check_unit_interval(d)
    if v >= 1.0 - 1e-12:
        warnings.warn("d = 1 makes the discrimination task trivial", DegenerateInputWarning,
                      stacklevel=2)
    gap = delta - chi
    if abs(np.sin(gap)) < 1e-12:
        warnings.warn("identical targets (delta = chi): degenerate but well defined",
                      DegenerateInputWarning, stacklevel=2)
    return 0.5 - 0.5 * np.sqrt(v * v * np.cos(gap) ** 2 + np.sin(gap) ** 2)


def case2_lower_bound_raw(d: float, m, n) -> float:
    """Unclamped lower bound 1/2 - (d + |m - n|) / 4 on the constrained error."""
    v = _check_unit_interval(d)
    mv = _check_bloch(m, "m")
    nv = _check_bloch(n, "n")
    return 0.5 - 0.25 * (v + float(np.linalg.norm(mv - nv)))


def case2_lower_bound(d: float, m, n) -> float:
    """Lower bound on the constrained error for mixed targets, clamped at zero."""
    return max(0.0, case2_lower_bound_raw(d, m, n))


def case4_sigma_b(mu: float, x: float, y: float) -> np.ndarray:
    """Explicit second target [[c, a-ib], [a+ib, 1-c]] of the rotated-basis family."""
    mu = _check_schmidt(mu, "mu")
    a_minus_ib = np.sin(2.0 * x) * np.exp(-1j * y) * (2.0 * mu - 1.0) / 2.0
    c = np.sin(x) ** 2 + mu * np.cos(2.0 * x)
    return np.array([[c, a_minus_ib], [np.conj(a_minus_ib), 1.0 - c]], dtype=complex)


def case4_povm_error(lam: float, mu: float, x: float, y: float) -> float:
    """Unassisted optimal error (1 - sqrt((lam - c)^2 + a^2 + b^2)) / 2 for the rotated-basis targets."""
    lam = _check_schmidt(lam, "lam")
    mu = _check_schmidt(mu, "mu")
    a_minus_ib = np.sin(2.0 * x) * np.exp(-1j * y) * (2.0 * mu - 1.0) / 2.0
    c = np.sin(x) ** 2 + mu * np.cos(2.0 * x)
    gap = np.sqrt((lam - c) ** 2 + abs(a_minus_ib) ** 2)
    return 0.5 * (1.0 - gap)


def example_joint_trace_norm(dtheta: float) -> float:
    """Joint trace norm sqrt(3 - cos(2 dtheta)) of the |0>/|+> product family."""
    return float(np.sqrt(3.0 - np.cos(2.0 * dtheta)))


def case1_objective_closed_form(dtheta: float, chi: float, delta: float) -> float:
    """Unconstrained objective value for the pure-target product family."""
    gap = delta - chi
    return 0.5 - 0.5 * np.sqrt(np.sin(dtheta) ** 2 * np.cos(gap) ** 2 + np.sin(gap) ** 2)


def case3_objective_closed_form(dtheta: float, lam: float, mu: float) -> float:
    """Objective via the pure-state overlap cos(dtheta) (sqrt(lam mu) + sqrt((1-lam)(1-mu)))."""
    k = np.sqrt(lam * mu) + np.sqrt((1.0 - lam) * (1.0 - mu))
    return 0.5 - 0.5 * np.sqrt(1.0 - np.cos(dtheta) ** 2 * k * k)


def case4_objective_closed_form(lam: float, mu: float, x: float, y: float) -> float:
    """Objective for the rotated-basis entangled family; independent of theta."""
    ov_sq = np.cos(x) ** 2 * (lam * mu + (1.0 - lam) * (1.0 - mu)
                              - 2.0 * np.sqrt(lam * mu * (1.0 - lam) * (1.0 - mu)) * np.cos(y))
    return 0.5 - 0.5 * np.sqrt(1.0 - ov_sq)


def canonicalize_bloch_pair(m, n) -> tuple[np.ndarray, np.ndarray]:
    """Rotate a Bloch pair to the plane form (0, 0, m), (p, 0, n).

    A global rotation of both targets leaves every trace norm in the task
    unchanged, so any pair can be brought to this form without loss.
    """
    mv = _check_bloch(m, "m")
    nv = _check_bloch(n, "n")
    mm = float(np.linalg.norm(mv))
    if mm < 1e-14:
        return np.array([0.0, 0.0, 0.0]), np.array([0.0, 0.0, float(np.linalg.norm(nv))])
    mhat = mv / mm
    n_par = float(nv @ mhat)
    perp = nv - n_par * mhat
    return np.array([0.0, 0.0, mm]), np.array([float(np.linalg.norm(perp)), 0.0, n_par])


# ---------------------------------------------------------------------------
# Scenario parameter handling and the family registry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScenarioParams:
    """A scenario tag with its fixed target parameters and free auxiliary names."""

    scenario_id: str
    fixed: dict
    free: tuple
    notes: tuple = ()


@dataclass(frozen=True)
class ScenarioFamily:
    """Callable bundle describing one joint-state family for the optimizer."""

    scenario_id: str
    free_names: tuple
    domains: dict
    fixed_names: tuple
    fixed_defaults: dict
    pure_pair: bool
    dist_kind: str  # "distance" (half trace norm) or "norm" (full trace norm)
    build: Callable[..., JointStatePair]
    max_concurrence: Callable[[dict], float]
    aux_difference_batch: Callable[[dict, dict], np.ndarray]
    statevectors_batch: Callable[[dict, dict], tuple] | None = None
    difference_batch: Callable[[dict, dict], np.ndarray] | None = None
    param_kinds: dict = field(default_factory=dict)


def _pure_batch(angles: np.ndarray) -> np.ndarray:
    return np.stack([np.cos(angles), np.sin(angles)], axis=1).astype(complex)


def _perp_batch(angles: np.ndarray) -> np.ndarray:
    return np.stack([np.sin(angles), -np.cos(angles)], axis=1).astype(complex)


def _proj_batch(vecs: np.ndarray) -> np.ndarray:
    return np.einsum("ni,nj->nij", vecs, vecs.conj())


def _kron_vec_batch(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.einsum("ni,j->nij", a, b).reshape(a.shape[0], 4)


def _kron_proj_batch(projs: np.ndarray, fixed_2x2: np.ndarray) -> np.ndarray:
    n = projs.shape[0]
    return np.einsum("nij,kl->nikjl", projs, fixed_2x2).reshape(n, 4, 4)


def _aux_diff_theta_phi(fixed: dict, free: dict) -> np.ndarray:
    return _proj_batch(_pure_batch(free["theta"])) - _proj_batch(_pure_batch(free["phi"]))


def _example_statevectors(fixed: dict, free: dict):
    psi = _kron_vec_batch(_pure_batch(free["theta"]), _KET0)
    phi = _kron_vec_batch(_pure_batch(free["phi"]), _KETPLUS)
    return psi, phi


def _case1_statevectors(fixed: dict, free: dict):
    psi = _kron_vec_batch(_pure_batch(free["theta"]),
                          qstate.pure_from_angle(fixed["chi"]))
    phi = _kron_vec_batch(_pure_batch(free["phi"]),
                          qstate.pure_from_angle(fixed["delta"]))
    return psi, phi


def _case3_statevectors(fixed: dict, free: dict):
    lam, mu = fixed["lam"], fixed["mu"]
    psi = (np.sqrt(lam) * _kron_vec_batch(_pure_batch(free["theta"]), _KET0)
           + np.sqrt(1.0 - lam) * _kron_vec_batch(_perp_batch(free["theta"]), _KET1))
    phi = (np.sqrt(mu) * _kron_vec_batch(_pure_batch(free["phi"]), _KET0)
           + np.sqrt(1.0 - mu) * _kron_vec_batch(_perp_batch(free["phi"]), _KET1))
    return psi, phi


def _case4_statevectors(fixed: dict, free: dict):
    lam, mu = fixed["lam"], fixed["mu"]
    zero_p, one_p = qstate.primed_basis(fixed["x"], fixed["y"])
    psi = (np.sqrt(lam) * _kron_vec_batch(_pure_batch(free["theta"]), _KET0)
           + np.sqrt(1.0 - lam) * _kron_vec_batch(_perp_batch(free["theta"]), _KET1))
    phi = (np.sqrt(mu) * _kron_vec_batch(_pure_batch(free["theta"]), zero_p)
           + np.sqrt(1.0 - mu) * _kron_vec_batch(_perp_batch(free["theta"]), one_p))
    return psi, phi


def _case2_difference(fixed: dict, free: dict) -> np.ndarray:
    rho_b = qstate.bloch_to_density(np.array([0.0, 0.0, fixed["m"]]))
    sigma_b = qstate.bloch_to_density(np.array([fixed["p"], 0.0, fixed["n"]]))
    lhs = _kron_proj_batch(_proj_batch(_pure_batch(free["theta"])), rho_b)
    rhs = _kron_proj_batch(_proj_batch(_pure_batch(free["phi"])), sigma_b)
    return lhs - rhs


def _case4_product_difference(fixed: dict, free: dict) -> np.ndarray:
    lam, mu = fixed["lam"], fixed["mu"]
    rho_b = lam * qstate.projector(_KET0) + (1.0 - lam) * qstate.projector(_KET1)
    zero_p, one_p = qstate.primed_basis(fixed["x"], fixed["y"])
    sigma_b = mu * qstate.projector(zero_p) + (1.0 - mu) * qstate.projector(one_p)
    lhs = _kron_proj_batch(_proj_batch(_pure_batch(free["theta"])), rho_b)
    rhs = _kron_proj_batch(_proj_batch(_pure_batch(free["phi"])), sigma_b)
    return lhs - rhs


def _case4_aux_difference(fixed: dict, free: dict) -> np.ndarray:
    # rho_A - sigma_A = (lam - mu)(P_psi - P_psi_perp); the shared basis makes
    # its trace norm 2|lam - mu| independently of theta.
    diff = _proj_batch(_pure_batch(free["theta"])) - _proj_batch(_perp_batch(free["theta"]))
    return (fixed["lam"] - fixed["mu"]) * diff


def _zero_concurrence(fixed: dict) -> float:
    return 0.0


def _schmidt_max_concurrence(fixed: dict) -> float:
    return max(measures.schmidt_concurrence(fixed["lam"]),
               measures.schmidt_concurrence(fixed["mu"]))


def _build_case2_plane(theta: float, phi: float, m: float, n: float, p: float) -> JointStatePair:
    return build_case2(theta, phi, (0.0, 0.0, m), (p, 0.0, n))


_THETA_PHI = ("theta", "phi")
_THETA_PHI_DOMAINS = {"theta": (0.0, _HALF_PI), "phi": (0.0, _HALF_PI)}

FAMILIES: dict[str, ScenarioFamily] = {
    "example": ScenarioFamily(
        scenario_id="example",
        free_names=_THETA_PHI,
        domains=dict(_THETA_PHI_DOMAINS),
        fixed_names=(),
        fixed_defaults={},
        pure_pair=True,
        dist_kind="distance",
        build=build_example,
        max_concurrence=_zero_concurrence,
        aux_difference_batch=_aux_diff_theta_phi,
        statevectors_batch=_example_statevectors,
    ),
    "case1": ScenarioFamily(
        scenario_id="case1",
        free_names=_THETA_PHI,
        domains=dict(_THETA_PHI_DOMAINS),
        fixed_names=("chi", "delta"),
        fixed_defaults={"chi": 0.0, "delta": np.pi / 4.0},
        pure_pair=True,
        dist_kind="distance",
        build=build_case1,
        max_concurrence=_zero_concurrence,
        aux_difference_batch=_aux_diff_theta_phi,
        statevectors_batch=_case1_statevectors,
        param_kinds={"chi": "angle_half_pi", "delta": "angle_half_pi"},
    ),
    "case2": ScenarioFamily(
        scenario_id="case2",
        free_names=_THETA_PHI,
        domains=dict(_THETA_PHI_DOMAINS),
        fixed_names=("m", "n", "p"),
        fixed_defaults={"m": 0.8, "n": 0.1, "p": 0.3},
        pure_pair=False,
        dist_kind="norm",
        build=_build_case2_plane,
        max_concurrence=_zero_concurrence,
        aux_difference_batch=_aux_diff_theta_phi,
        difference_batch=_case2_difference,
    ),
    "case3": ScenarioFamily(
        scenario_id="case3",
        free_names=_THETA_PHI,
        domains=dict(_THETA_PHI_DOMAINS),
        fixed_names=("lam", "mu"),
        fixed_defaults={"lam": 0.25, "mu": 0.33},
        pure_pair=True,
        dist_kind="norm",
        build=build_case3,
        max_concurrence=_schmidt_max_concurrence,
        aux_difference_batch=_aux_diff_theta_phi,
        statevectors_batch=_case3_statevectors,
        param_kinds={"lam": "schmidt", "mu": "schmidt"},
    ),
    "case4": ScenarioFamily(
        scenario_id="case4",
        free_names=("theta",),
        domains={"theta": (0.0, _HALF_PI)},
        fixed_names=("lam", "mu", "x", "y"),
        fixed_defaults={"lam": 0.25, "mu": 0.33, "x": np.pi / 4.0, "y": np.pi / 2.0},
        pure_pair=True,
        dist_kind="norm",
        build=build_case4,
        max_concurrence=_schmidt_max_concurrence,
        aux_difference_batch=_case4_aux_difference,
        statevectors_batch=_case4_statevectors,
        param_kinds={"lam": "schmidt", "mu": "schmidt",
                     "x": "angle_half_pi", "y": "angle_two_pi"},
    ),
    "case4-product": ScenarioFamily(
        scenario_id="case4-product",
        free_names=_THETA_PHI,
        domains=dict(_THETA_PHI_DOMAINS),
        fixed_names=("lam", "mu", "x", "y"),
        fixed_defaults={"lam": 0.25, "mu": 0.33, "x": np.pi / 4.0, "y": np.pi / 2.0},
        pure_pair=False,
        dist_kind="distance",
        build=build_case4_product,
        max_concurrence=_zero_concurrence,
        aux_difference_batch=_aux_diff_theta_phi,
        difference_batch=_case4_product_difference,
    ),
}


def family(scenario_id: str) -> ScenarioFamily:
    try:
        return FAMILIES[scenario_id]
    except KeyError:
        raise ValueError(f"unknown scenario {scenario_id!r}; "
                         f"expected one of {', '.join(SCENARIO_IDS)}") from None


def _wrap_angle(value: float, period: float, hi: float, name: str, notes: list) -> float:
    v = float(value) % period
    if v > hi + 1e-12:
        notes.append(f"{name}={value:.6g} outside [0, {hi:.6g}]; wrapped to {v:.6g}")
    return v


def make_params(scenario_id: str, **fixed) -> ScenarioParams:
    """Validate and assemble scenario parameters, wrapping out-of-range angles.

    Angles with canonical range [0, pi/2] are reduced modulo pi (the state
    period) and flagged in notes when the wrapped value still falls outside
    the canonical range; the mathematics stays well defined either way.
    """
    fam = family(scenario_id)
    unknown = set(fixed) - set(fam.fixed_names)
    if unknown:
        raise ValueError(f"unknown parameters for {scenario_id}: {sorted(unknown)}")
    merged = {**fam.fixed_defaults, **{k: float(v) for k, v in fixed.items()}}
    notes: list = []
    for name, value in list(merged.items()):
        kind = fam.param_kinds.get(name)
        if kind == "angle_half_pi":
            merged[name] = _wrap_angle(value, np.pi, _HALF_PI, name, notes)
        elif kind == "angle_two_pi":
            merged[name] = float(value) % (2.0 * np.pi)
        elif kind == "schmidt":
            _check_schmidt(value, name)
    if scenario_id == "case2":
        if abs(merged["m"]) > 1.0 + qstate.BLOCH_NORM_TOL:
            raise ValueError(f"|m| = {abs(merged['m']):.12f} exceeds 1")
        nrm = float(np.hypot(merged["p"], merged["n"]))
        if nrm > 1.0 + qstate.BLOCH_NORM_TOL:
            raise ValueError(f"second Bloch vector norm {nrm:.12f} exceeds 1")
    return ScenarioParams(scenario_id=scenario_id, fixed=merged,
                          free=fam.free_names, notes=tuple(notes))


def build_point(params: ScenarioParams, point: dict) -> JointStatePair:
    """Construct the joint-state pair at a full assignment of free parameters."""
    fam = family(params.scenario_id)
    missing = set(fam.free_names) - set(point)
    if missing:
        raise ValueError(f"missing free parameters: {sorted(missing)}")
    kwargs = {**params.fixed, **{k: float(point[k]) for k in fam.free_names}}
    return fam.build(**kwargs)
