"""sqzkit: simulation and parameter estimation for guided-wave squeezed light.

The package models squeezed-vacuum generation and lossy homodyne detection
with Gaussian states, synthesizes phase-scanned analyzer traces, fits the
(mu, eta) chain model to squeezing-versus-power data, evaluates loss budgets,
and checks two-mode entanglement via the Duan criterion.
"""

from .chain import (
    LossBudget,
    PumpSqueezeModel,
    SourceSpecs,
    eta_electronic,
    eta_total,
    infer_source_variance,
    measured_variance,
    pair_flux,
    pump_budget,
    solve_waveguide_loss,
)
from .config import RunConfig
from .entangle import DuanReport, duan_variance, epr_from_two_squeezers
from .errors import (
    DataFormatError,
    DomainError,
    InsufficientDataError,
    InvalidParameterError,
    InvalidStateError,
    ModelValidityError,
    ToolkitError,
)
from .fitting import (
    DataSet,
    FitResult,
    fit_squeezing_curve,
    generate_synthetic_dataset,
    model_jacobian,
    residuals,
)
from .gaussian import (
    GaussianState,
    SymplecticOp,
    apply_loss,
    apply_symplectic,
    beam_splitter_50_50,
    beamsplitter_op,
    from_db,
    phase_rotation,
    quadrature_variance,
    rotation_op,
    squeeze_op,
    squeezed_vacuum,
    symplectic_eigenvalues,
    symplectic_form,
    to_db,
    vacuum,
)
from .trace import (
    ExtremaEstimate,
    ScanConfig,
    Trace,
    estimate_extrema,
    synthesize_trace,
    video_filter,
)

__version__ = "0.1.0"

__all__ = [
    "DataFormatError",
    "DataSet",
    "DomainError",
    "DuanReport",
    "ExtremaEstimate",
    "FitResult",
    "GaussianState",
    "InsufficientDataError",
    "InvalidParameterError",
    "InvalidStateError",
    "LossBudget",
    "ModelValidityError",
    "PumpSqueezeModel",
    "RunConfig",
    "ScanConfig",
    "SourceSpecs",
    "SymplecticOp",
    "ToolkitError",
    "Trace",
    "apply_loss",
    "apply_symplectic",
    "beam_splitter_50_50",
    "beamsplitter_op",
    "duan_variance",
    "epr_from_two_squeezers",
    "estimate_extrema",
    "eta_electronic",
    "eta_total",
    "fit_squeezing_curve",
    "from_db",
    "generate_synthetic_dataset",
    "infer_source_variance",
    "measured_variance",
    "model_jacobian",
    "pair_flux",
    "phase_rotation",
    "pump_budget",
    "quadrature_variance",
    "residuals",
    "rotation_op",
    "solve_waveguide_loss",
    "squeeze_op",
    "squeezed_vacuum",
    "symplectic_eigenvalues",
    "symplectic_form",
    "synthesize_trace",
    "to_db",
    "vacuum",
    "video_filter",
]
