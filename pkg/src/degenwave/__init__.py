"""Spectral-Galerkin laboratory for a 2D boundary-degenerate wave equation.

The model is phi_tt - Div(A grad phi) = f on the unit square with
A = diag(1, r^alpha), 0 < alpha < 1, homogeneous Dirichlet data.  The
package computes the weighted radial eigenbasis, evolves truncated modal
states exactly in time, certifies Hardy-Poincare constants (including the
logarithmic blow-up of the critical truncated constants), realizes the
Carleman weight identities as grid residuals, and runs boundary
observability experiments around the estimate with interior remainder.
"""

from .carleman import (
    ComponentIntegrals,
    ConjugationReport,
    SmoothModalSolution,
    WeightDerivatives,
    WeightField,
    bessel_mode,
    build_weight_field,
    carleman_component_integrals,
    carleman_constant_scan,
    conjugate_field,
    conjugation_order_study,
    conjugation_residual,
    eval_b,
    eval_xi_sigma,
)
from .errors import (
    BetaOutOfRange,
    BoundaryViolation,
    ConfigError,
    ConvergenceFailure,
    DegenerateCellTouched,
    DegenWaveError,
    DeltaOutOfRange,
    DivergentWeight,
    GridMismatch,
    InsufficientData,
    InvalidMeshSpec,
    NoAdmissibleEpsilon,
    NonPositiveInput,
    TimeTooShort,
    TruncationTooSmall,
)
from .hardy import (
    BlowupFit,
    HardyCheck,
    HardyReport,
    best_subcritical_constant,
    blowup_rate_fit,
    critical_truncated_constant,
    exact_critical_constant,
    subcritical_bound,
    subcritical_hardy_check,
)
from .observability import (
    EnsembleStats,
    ObservabilityRecord,
    ObstructionScan,
    default_beta,
    default_horizon,
    hidden_trace_ratio_ensemble,
    hidden_trace_stability,
    high_mode_obstruction_scan,
    observability_ratio,
)
from .params import (
    CarlemanParams,
    CutoffSpec,
    DegeneracyParams,
    DomainSpec,
    beta_upper_bound,
    carleman_params_from_json,
    carleman_params_to_json,
    eval_cutoff,
    eval_cutoff_theta,
    eval_cutoff_time,
    observation_time_threshold,
    theta_cutoff,
    theta_strips,
    time_cutoff,
    validate_carleman_params,
)
from .radial import (
    RadialBasis,
    RadialEigenpair,
    RadialMesh,
    WeightedMatrices,
    assemble_weighted_system,
    bessel_eigenvalue,
    bessel_radial_mode,
    build_graded_mesh,
    build_log_mesh,
    build_uniform_mesh,
    eigenpairs_to_csv,
    elliptic_identity_residual,
    one_sided_flux,
    refine_smallest_eigenpair,
    solve_eigenpairs,
    solve_radial_basis,
)
from .waves import (
    EnergyReport,
    ModalCoefficients,
    TraceReport,
    boundary_trace_norm,
    cosine_overlap_matrix,
    data_norms,
    duhamel_forcing,
    energy,
    energy_series,
    evolve,
    full_trace_norm_closed,
    interior_observation_norm,
    modal_state,
    parseval_l2_norm_sq,
    project_initial_data,
    random_state,
    sine_overlap_matrix,
)

__version__ = "0.1.0"
