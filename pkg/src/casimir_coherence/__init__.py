"""Gaussian-state quantum information and the dynamical Casimir effect two-mode state."""

from .dce import (
    Convention,
    DceState,
    DriveConfig,
    ThermalEnvironment,
    bogoliubov_quadrature_map,
    dce_cm,
    epsilon_from_f,
    input_cm,
    output_state,
    perturbative_coherence,
    perturbative_discord,
    perturbative_negativity,
    small_parameter_f,
    thermal_occupation,
)
from .errors import ConfigError, NumericalFailure, SupportError, TruncationError
from .measures import (
    MeasureReport,
    gaussian_coherence,
    gaussian_discord,
    log_negativity,
    measure_report,
)
from .symplectic import (
    CovarianceMatrix,
    QuadratureMap,
    SymplecticSpectrum,
    mean_occupation,
    partial_transpose,
    seralian,
    symplectic_eigenvalues,
    symplectic_form,
    von_neumann_entropy,
)

__all__ = [
    "ConfigError",
    "Convention",
    "CovarianceMatrix",
    "DceState",
    "DriveConfig",
    "MeasureReport",
    "NumericalFailure",
    "QuadratureMap",
    "SupportError",
    "SymplecticSpectrum",
    "ThermalEnvironment",
    "TruncationError",
    "bogoliubov_quadrature_map",
    "dce_cm",
    "epsilon_from_f",
    "gaussian_coherence",
    "gaussian_discord",
    "input_cm",
    "log_negativity",
    "mean_occupation",
    "measure_report",
    "output_state",
    "partial_transpose",
    "perturbative_coherence",
    "perturbative_discord",
    "perturbative_negativity",
    "seralian",
    "small_parameter_f",
    "symplectic_eigenvalues",
    "symplectic_form",
    "thermal_occupation",
    "von_neumann_entropy",
]

__version__ = "0.1.0"
