"""Constrained sub-Helstrom binary quantum state discrimination toolkit."""

from .linalg import (
    EigenSystem,
    NumericalError,
    hermitian_eigensystem,
    partial_trace,
    tensor_product,
    trace_norm,
)
from .measures import (
    concurrence_pure,
    helstrom_error,
    helstrom_success,
    is_povm_pair,
    schmidt_concurrence,
    success_probability,
    trace_distance,
)
from .qstate import (
    bloch_to_density,
    density_to_bloch,
    orthogonal_complement,
    primed_basis,
    projector,
    pure_from_angle,
)
from .scenarios import (
    SCENARIO_IDS,
    DegenerateInputWarning,
    JointStatePair,
    ScenarioParams,
    analytic_case1_error,
    analytic_example_error,
    build_case1,
    build_case2,
    build_case3,
    build_case4,
    build_case4_product,
    build_example,
    build_point,
    canonicalize_bloch_pair,
    case2_lower_bound,
    case2_lower_bound_raw,
    case4_povm_error,
    case4_sigma_b,
    example_joint_trace_norm,
    make_params,
)
from .optimizer import (
    ConstraintSet,
    InfeasibleError,
    OptimizationResult,
    OptimizerConfig,
    SweepTable,
    delta_p,
    feasible,
    optimize,
    sweep,
)
from .mcsim import (
    MeasurementPair,
    SimulationReport,
    helstrom_projectors,
    projectors_for,
    simulate,
)

__version__ = "0.1.0"
