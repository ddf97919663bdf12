"""Chirp-driven two-level-system simulator with an eigenoperator solution.

The package propagates an SU(2) system under a linearly chirped drive with a
linearly ramped adiabatic parameter, by three routes: two independent exact
integrators (Liouville expectation-value ODE and a unitary spinor stepper),
the closed-form eigenoperator solution with its accumulated phases, and a
first-order-corrected variant.  Diagnostics quantify where the analytic
solution holds and how it breaks down.
"""

from .algebra import (
    EigenSystem,
    GeneratorMatrix,
    LiouvilleVec,
    SpinorState,
    bprime,
    eigensystem,
    expectations_from_spinor,
    kappa_of,
)
from .analysis import (
    DistanceGrid,
    FitResult,
    distance_grid,
    distance_series,
    linear_fit,
    normalized_energy,
    phase_space_export,
)
from .errors import (
    ComplexResidue,
    DegenerateHamiltonian,
    DegenerateInput,
    GridMismatch,
    NotEigenstate,
    NotNormalized,
    SingularMu,
    StepSizeUnderflow,
    ZeroInitialEnergy,
)
from .exact import (
    IntegratorConfig,
    Trajectory,
    ground_state,
    integrate_liouville,
    integrate_spinor,
    liouville_rhs,
)
from .inertial import (
    CorrectionOperator,
    InertialReport,
    PhaseLedger,
    adiabatic_reference,
    corrected_propagate,
    correction_operator,
    dynamical_phase,
    geometric_phase,
    geometric_phase_complex,
    inertial_parameter,
    inertial_propagate,
    phase_ledger,
)
from .protocol import (
    ProtocolParams,
    ProtocolSample,
    ValidationReport,
    default_horizon,
    fields_at,
    mu_at,
    omega_rabi_at,
    rabi_rate_at,
    sample_at,
    theta_at,
    theta_by_quadrature,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "ProtocolParams", "ProtocolSample", "ValidationReport",
    "mu_at", "fields_at", "omega_rabi_at", "rabi_rate_at", "theta_at",
    "theta_by_quadrature", "sample_at", "default_horizon", "validate",
    "LiouvilleVec", "GeneratorMatrix", "EigenSystem", "SpinorState",
    "bprime", "eigensystem", "kappa_of", "expectations_from_spinor",
    "IntegratorConfig", "Trajectory", "liouville_rhs",
    "integrate_liouville", "integrate_spinor", "ground_state",
    "PhaseLedger", "InertialReport", "CorrectionOperator",
    "inertial_propagate", "dynamical_phase", "geometric_phase",
    "geometric_phase_complex", "phase_ledger", "inertial_parameter",
    "correction_operator", "corrected_propagate", "adiabatic_reference",
    "DistanceGrid", "FitResult", "normalized_energy", "distance_series",
    "distance_grid", "linear_fit", "phase_space_export",
    "SingularMu", "StepSizeUnderflow", "NotNormalized",
    "DegenerateHamiltonian", "NotEigenstate", "ComplexResidue",
    "GridMismatch", "ZeroInitialEnergy", "DegenerateInput",
]
