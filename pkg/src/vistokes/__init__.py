"""Visibility-based polarization tomography of an undetected photon.

State-vector simulation of a two-source induced-coherence interferometer,
fringe synthesis and least-squares visibility extraction, visibility Stokes
parameters with their consistency geometry, and scenario-based state
reconstruction.
"""

from .config import (
    ConfigError,
    RunConfig,
    dump_json,
    format_float,
    load_config,
    write_json,
)
from .environment import (
    CoherenceTriple,
    EnvironmentVectors,
    FeasibilityCheck,
    InfeasibleTripleError,
    check_feasible,
    embed,
    feasible_q_interval,
    gram_matrix,
    random_feasible_triple,
    solve_q_2d,
)
from .fringes import (
    DarkPortError,
    DegenerateGridError,
    FitError,
    FringeFit,
    FringeRecord,
    fit,
    phase_grid,
    read_fringe_csv,
    sweep,
    visibility_minmax,
    write_fringe_csv,
)
from .interferometer import (
    AXIS_ENVIRONMENT,
    AXIS_IDLER_PATH,
    AXIS_IDLER_POL,
    AXIS_SIGNAL_PATH,
    AXIS_SIGNAL_POL,
    BS_MATRIX,
    PORT_LOWER,
    PORT_UPPER,
    IdlerPrep,
    InterferenceCoefficients,
    SetupConfig,
    SignalPrep,
    analytic_visibilities,
    analytic_visibilities_mixed,
    build_state,
    coefficients,
    detection_probability,
    post_measurement_closed_form,
    post_measurement_state,
    simulated_visibility,
    unbiased_prep,
)
from .linalg import (
    DensityMatrix2,
    DimensionError,
    InvalidDensityMatrixError,
    NonHermitianError,
    OperatorMatrix,
    StateVector,
    expectation,
    fidelity,
    partial_trace,
    tensor,
)
from .operators import (
    StokesOperators,
    VisibilityOperator,
    idler_joint_state,
    incoherence_operator,
    stokes_operators,
    visibility_operator,
)
from .pipeline import (
    ROUND_OF_BASIS,
    ROUND_SIGNAL_ZETA,
    ExtractionSummary,
    analytic_visibility_stokes,
    extract_visibilities,
    fit_fringes,
    measure_visibility_stokes,
    round_config,
    simulate_fringes,
)
from .polarization import (
    BASIS_LABELS,
    BASIS_PAIRS,
    BASIS_VECTORS,
    CONJUGATE_LABEL,
    IDENTITY_2,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    BasisVisibilities,
    PolarizationState,
    basis_ket,
    conjugate_basis_state,
    wrap_phase,
)
from .reconstruct import (
    ConsistentSample,
    InfeasibleDataError,
    ReconstructionResult,
    Scenario,
    ScenarioMismatchError,
    enumerate_consistent_states,
    reconstruct_hv_asymmetric,
    reconstruct_pure,
    reconstruct_symmetric,
)
from .stokes import (
    BlochVector,
    BoundsReport,
    ConsistencyBall,
    EllipsoidSpec,
    IdentityResiduals,
    InconsistentVisibilitiesError,
    VisibilityStokes,
    bounds_check,
    consistency_ball,
    identities_check,
    normalized_stokes,
    standard_stokes,
    visibility_ellipsoid,
    visibility_stokes,
)

__version__ = "0.1.0"

__all__ = [
    "AXIS_ENVIRONMENT",
    "AXIS_IDLER_PATH",
    "AXIS_IDLER_POL",
    "AXIS_SIGNAL_PATH",
    "AXIS_SIGNAL_POL",
    "BASIS_LABELS",
    "BASIS_PAIRS",
    "BASIS_VECTORS",
    "BS_MATRIX",
    "CONJUGATE_LABEL",
    "ConfigError",
    "BasisVisibilities",
    "BlochVector",
    "BoundsReport",
    "CoherenceTriple",
    "ConsistencyBall",
    "ConsistentSample",
    "DarkPortError",
    "DegenerateGridError",
    "DensityMatrix2",
    "DimensionError",
    "EllipsoidSpec",
    "EnvironmentVectors",
    "ExtractionSummary",
    "FeasibilityCheck",
    "FitError",
    "FringeFit",
    "FringeRecord",
    "IDENTITY_2",
    "IdentityResiduals",
    "IdlerPrep",
    "InvalidDensityMatrixError",
    "NonHermitianError",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "RunConfig",
    "InconsistentVisibilitiesError",
    "InfeasibleDataError",
    "InfeasibleTripleError",
    "InterferenceCoefficients",
    "OperatorMatrix",
    "PORT_LOWER",
    "PORT_UPPER",
    "PolarizationState",
    "ROUND_OF_BASIS",
    "ROUND_SIGNAL_ZETA",
    "ReconstructionResult",
    "Scenario",
    "ScenarioMismatchError",
    "SetupConfig",
    "SignalPrep",
    "StateVector",
    "StokesOperators",
    "VisibilityOperator",
    "VisibilityStokes",
    "analytic_visibilities",
    "analytic_visibilities_mixed",
    "analytic_visibility_stokes",
    "basis_ket",
    "bounds_check",
    "build_state",
    "check_feasible",
    "coefficients",
    "conjugate_basis_state",
    "consistency_ball",
    "detection_probability",
    "dump_json",
    "embed",
    "enumerate_consistent_states",
    "expectation",
    "extract_visibilities",
    "feasible_q_interval",
    "fidelity",
    "fit",
    "fit_fringes",
    "format_float",
    "gram_matrix",
    "load_config",
    "identities_check",
    "idler_joint_state",
    "incoherence_operator",
    "measure_visibility_stokes",
    "normalized_stokes",
    "partial_trace",
    "phase_grid",
    "post_measurement_closed_form",
    "post_measurement_state",
    "random_feasible_triple",
    "read_fringe_csv",
    "reconstruct_hv_asymmetric",
    "reconstruct_pure",
    "reconstruct_symmetric",
    "round_config",
    "simulate_fringes",
    "simulated_visibility",
    "solve_q_2d",
    "standard_stokes",
    "stokes_operators",
    "sweep",
    "tensor",
    "unbiased_prep",
    "visibility_ellipsoid",
    "visibility_minmax",
    "visibility_operator",
    "visibility_stokes",
    "wrap_phase",
    "write_json",
]
