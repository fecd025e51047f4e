"""Constrained minimization of the assisted discrimination error.

The objective at a point of free auxiliary parameters is
1/2 - ||rho_AB - sigma_AB||_1 / 4, minimized subject to a bound d on the
local distinguishability of the auxiliary marginals and a bound E on the
joint-state concurrence.  Strategy: exhaustive feasibility-filtered grid
scan, then derivative-free simplex refinement from the best grid point with
infeasible proposals projected back onto the constraint boundary.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize as _scipy_minimize

from . import linalg, measures, scenarios

BOUNDARY_ACTIVE_TOL = 1e-6
_PROJECTION_ROUNDS = 4


class InfeasibleError(ValueError):
    """The feasible set is empty; carries the minimal constraint violation."""

    def __init__(self, message: str, violation: float, slacks: dict):
        super().__init__(message)
        self.violation = violation
        self.slacks = slacks


@dataclass(frozen=True)
class ConstraintSet:
    """Resource bounds: local distinguishability d and joint concurrence e."""

    d: float
    e: float = 1.0
    e_mode: str = "strict"

    def __post_init__(self):
        if not 0.0 <= self.d <= 1.0:
            raise ValueError(f"d must lie in [0, 1], got {self.d}")
        if not 0.0 <= self.e <= 1.0:
            raise ValueError(f"e must lie in [0, 1], got {self.e}")
        if self.e_mode not in ("strict", "report"):
            raise ValueError(f"e_mode must be 'strict' or 'report', got {self.e_mode!r}")


@dataclass(frozen=True)
class OptimizerConfig:
    grid_points_per_dim: int = 101
    refine_tolerance: float = 1e-8
    max_refine_iterations: int = 500
    constraint_slack: float = 1e-9

    def __post_init__(self):
        if self.grid_points_per_dim < 3:
            raise ValueError("grid_points_per_dim must be at least 3")
        if not 0.0 < self.refine_tolerance < 1e-3:
            raise ValueError("refine_tolerance must be positive and below 1e-3")
        if self.max_refine_iterations < 1:
            raise ValueError("max_refine_iterations must be positive")
        if self.constraint_slack <= 0.0:
            raise ValueError("constraint_slack must be positive")


@dataclass(frozen=True)
class OptimizationResult:
    p_npovm: float
    argmin: dict
    p_povm: float
    delta_p: float
    constraint_slacks: dict
    boundary_active: dict
    feasible: bool
    converged: bool = True


@dataclass(frozen=True)
class SweepTable:
    axes: dict
    points: list
    rows: list

    @property
    def row_count(self) -> int:
        return len(self.rows)


class _Evaluator:
    """Batched objective and constraint evaluation for one scenario instance."""

    def __init__(self, params: scenarios.ScenarioParams, constraints: ConstraintSet):
        self.fam = scenarios.family(params.scenario_id)
        self.params = params
        self.constraints = constraints
        self.max_concurrence = float(self.fam.max_concurrence(params.fixed))

    def _free(self, pts: np.ndarray) -> dict:
        return {name: pts[:, i] for i, name in enumerate(self.fam.free_names)}

    def objective_batch(self, pts: np.ndarray) -> np.ndarray:
        free = self._free(pts)
        if self.fam.pure_pair:
            psi, phi = self.fam.statevectors_batch(self.params.fixed, free)
            overlap_sq = np.abs(np.einsum("ni,ni->n", psi.conj(), phi)) ** 2
            tn = 2.0 * np.sqrt(np.clip(1.0 - overlap_sq, 0.0, None))
        else:
            tn = linalg.trace_norm_batch(self.fam.difference_batch(self.params.fixed, free))
        return 0.5 - 0.25 * tn

    def objective(self, x: np.ndarray) -> float:
        return float(self.objective_batch(np.asarray(x, dtype=float)[np.newaxis])[0])

    def dist_batch(self, pts: np.ndarray) -> np.ndarray:
        aux = self.fam.aux_difference_batch(self.params.fixed, self._free(pts))
        tn = linalg.trace_norm_2x2_batch(aux)
        return 0.5 * tn if self.fam.dist_kind == "distance" else tn

    def dist(self, x: np.ndarray) -> float:
        return float(self.dist_batch(np.asarray(x, dtype=float)[np.newaxis])[0])

    def slacks(self, x: np.ndarray) -> dict:
        return {"d": self.constraints.d - self.dist(x),
                "e": self.constraints.e - self.max_concurrence}

    def point_dict(self, x: np.ndarray) -> dict:
        return {name: float(v) for name, v in zip(self.fam.free_names, x)}


def feasible(params: scenarios.ScenarioParams, point: dict, constraints: ConstraintSet,
             config: OptimizerConfig | None = None) -> tuple[bool, dict]:
    """Evaluate constraint slacks at a point of free parameters.

    slack_d = d - D(aux marginals), slack_e = E - max joint concurrence;
    feasible iff all enforced slacks exceed -constraint_slack (the
    concurrence slack is recorded but not enforced in report mode).
    """
    cfg = config or OptimizerConfig()
    ev = _Evaluator(params, constraints)
    x = np.array([float(point[name]) for name in ev.fam.free_names])
    slacks = ev.slacks(x)
    ok = slacks["d"] >= -cfg.constraint_slack
    if constraints.e_mode == "strict":
        ok = ok and slacks["e"] >= -cfg.constraint_slack
    return ok, slacks


def _grid_points(fam: scenarios.ScenarioFamily, n: int) -> np.ndarray:
    axes = [np.linspace(*fam.domains[name], n) for name in fam.free_names]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel(order="C") for m in mesh], axis=1)


def _project_factory(ev: _Evaluator, anchor: np.ndarray, lo: np.ndarray, hi: np.ndarray,
                     slack: float):
    d_max = ev.constraints.d + slack
    d_target = ev.constraints.d
    samples = np.linspace(0.0, 1.0, 33)

    def bisect(feas_pt: np.ndarray, infeas_pt: np.ndarray) -> np.ndarray:
        # batched interval shrinking: each round narrows the feasibility
        # crossing to 1/32 of the previous bracket
        a, b = feas_pt, infeas_pt
        for _ in range(_PROJECTION_ROUNDS):
            pts = a[np.newaxis] + samples[:, np.newaxis] * (b - a)[np.newaxis]
            feas = ev.dist_batch(pts) <= d_target
            if feas.all():
                return pts[-1]
            first_bad = int(np.argmin(feas))
            if first_bad == 0:
                return a
            a, b = pts[first_bad - 1], pts[first_bad]
        return a

    def project(x: np.ndarray) -> np.ndarray:
        xc = np.clip(x, lo, hi)
        if ev.dist(xc) <= d_max:
            return xc
        # restore feasibility along the last free coordinate when possible,
        # otherwise along the whole segment back to the feasible anchor
        coord = xc.copy()
        coord[-1] = anchor[-1]
        if ev.dist(coord) <= d_target:
            return bisect(coord, xc)
        return bisect(anchor.copy(), xc)

    return project


def optimize(params: scenarios.ScenarioParams, constraints: ConstraintSet,
             config: OptimizerConfig | None = None) -> OptimizationResult:
    """Minimize the assisted error over the scenario's free parameters."""
    cfg = config or OptimizerConfig()
    ev = _Evaluator(params, constraints)
    fam = ev.fam
    slack_e = constraints.e - ev.max_concurrence
    if constraints.e_mode == "strict" and slack_e < -cfg.constraint_slack:
        raise InfeasibleError(
            f"concurrence bound violated by {-slack_e:.6g} for {params.scenario_id}",
            violation=-slack_e, slacks={"d": np.nan, "e": slack_e})

    pts = _grid_points(fam, cfg.grid_points_per_dim)
    dist = ev.dist_batch(pts)
    feas = dist <= constraints.d + cfg.constraint_slack
    if not np.any(feas):
        violation = float(dist.min() - constraints.d)
        raise InfeasibleError(
            f"distinguishability bound d={constraints.d} unreachable "
            f"(minimal violation {violation:.6g}) for {params.scenario_id}",
            violation=violation, slacks={"d": -violation, "e": slack_e})
    feas_idx = np.flatnonzero(feas)
    values = ev.objective_batch(pts[feas_idx])
    vmin = float(values.min())
    # lexicographically first among near-ties, in grid scan order
    best_pos = int(np.flatnonzero(values <= vmin + cfg.refine_tolerance)[0])
    x_best = pts[feas_idx[best_pos]].copy()
    f_best = float(values[best_pos])

    lo = np.array([fam.domains[name][0] for name in fam.free_names])
    hi = np.array([fam.domains[name][1] for name in fam.free_names])
    project = _project_factory(ev, x_best, lo, hi, cfg.constraint_slack)

    def penalized(x: np.ndarray) -> float:
        xp = project(np.asarray(x, dtype=float))
        return ev.objective(xp) + float(np.linalg.norm(x - xp))

    step = (hi - lo) / max(cfg.grid_points_per_dim - 1, 1) * 0.5
    simplex = [x_best]
    for i in range(len(x_best)):
        vertex = x_best.copy()
        vertex[i] += step[i] if vertex[i] + step[i] <= hi[i] else -step[i]
        simplex.append(vertex)
    res = _scipy_minimize(
        penalized, x_best, method="Nelder-Mead",
        options={"initial_simplex": np.array(simplex),
                 "xatol": 1e-7, "fatol": cfg.refine_tolerance,
                 "maxiter": cfg.max_refine_iterations,
                 "maxfev": 4 * cfg.max_refine_iterations})
    converged = bool(res.success)
    x_ref = project(np.asarray(res.x, dtype=float))
    f_ref = ev.objective(x_ref)
    if np.isfinite(f_ref) and f_ref < f_best:
        x_star, p_npovm = x_ref, f_ref
    else:
        x_star, p_npovm = x_best, f_best

    slacks = ev.slacks(x_star)
    pair = scenarios.build_point(params, ev.point_dict(x_star))
    p_povm = measures.helstrom_error(pair.rho_b, pair.sigma_b)
    return OptimizationResult(
        p_npovm=p_npovm,
        argmin=ev.point_dict(x_star),
        p_povm=p_povm,
        delta_p=p_npovm - p_povm,
        constraint_slacks=slacks,
        boundary_active={k: abs(v) <= BOUNDARY_ACTIVE_TOL for k, v in slacks.items()},
        feasible=True,
        converged=converged,
    )


def delta_p(params: scenarios.ScenarioParams, constraints: ConstraintSet,
            config: OptimizerConfig | None = None) -> float:
    """Advantage of the assisted strategy; negative values beat the unassisted optimum."""
    return optimize(params, constraints, config).delta_p


def _infeasible_row(err: InfeasibleError) -> OptimizationResult:
    return OptimizationResult(
        p_npovm=float("nan"), argmin={}, p_povm=float("nan"), delta_p=float("nan"),
        constraint_slacks=dict(err.slacks), boundary_active={}, feasible=False)


def sweep(grid: dict, params: scenarios.ScenarioParams, constraints: ConstraintSet,
          config: OptimizerConfig | None = None, max_points: int = 1_000_000) -> SweepTable:
    """Optimize over a cartesian grid of fixed-parameter and/or constraint axes.

    Axis keys may name scenario fixed parameters or the constraint bounds
    'd' and 'E'.  Rows follow lexicographic order over the grid mapping;
    infeasible points become rows with feasible=False rather than aborting.
    """
    fam = scenarios.family(params.scenario_id)
    axes = {name: np.asarray(vals, dtype=float) for name, vals in grid.items()}
    for name, vals in axes.items():
        if vals.ndim != 1 or vals.size == 0:
            raise ValueError(f"axis {name!r} must be a nonempty 1-d sequence")
        if name not in fam.fixed_names and name not in ("d", "E"):
            raise ValueError(f"axis {name!r} is neither a fixed parameter of "
                             f"{params.scenario_id} nor a constraint bound")
    total = int(np.prod([v.size for v in axes.values()]))
    if total > max_points:
        raise ValueError(f"grid has {total} points, exceeding the cap of {max_points}")

    names = list(axes)
    points: list = []
    rows: list = []
    for combo in itertools.product(*(axes[n] for n in names)):
        assignment = dict(zip(names, (float(c) for c in combo)))
        fixed = {k: v for k, v in assignment.items() if k in fam.fixed_names}
        pt_params = scenarios.make_params(params.scenario_id, **{**params.fixed, **fixed}) \
            if fixed else params
        pt_constraints = replace(
            constraints,
            d=assignment.get("d", constraints.d),
            e=assignment.get("E", constraints.e))
        try:
            rows.append(optimize(pt_params, pt_constraints, config))
        except InfeasibleError as err:
            rows.append(_infeasible_row(err))
        points.append(assignment)
    return SweepTable(axes=axes, points=points, rows=rows)
