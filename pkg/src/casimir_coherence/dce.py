"""Two-mode output state of a flux-driven SQUID-terminated waveguide.

Modes are ordered ``(-, +)`` around half the drive frequency, so the
quadrature vector is ``(q_-, p_-, q_+, p_+)``. Small detuning is assumed
throughout: both modes sit at ``omega_d / 2`` and share one thermal occupation.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .measures import gaussian_coherence
from .symplectic import CovarianceMatrix, QuadratureMap

HBAR = 1.054571817e-34  # J s
K_B = 1.380649e-23  # J / K

DEFAULT_OMEGA_D = 20.0 * math.pi * 1e9  # rad / s
DEFAULT_L_EFF0 = 0.5e-3  # m
DEFAULT_V = 1.2e8  # m / s

#: beyond this value of f the leading-order expansions are not trusted
PERTURBATIVE_F_MAX = 0.08


class PerturbativeRangeWarning(UserWarning):
    pass


class Convention(str, Enum):
    """Temperature to photon-number conversion."""

    CALIBRATED = "paper"  # twice Bose-Einstein; reproduces the published occupations
    BOSE_EINSTEIN = "be"


@dataclass(frozen=True)
class DriveConfig:
    """Pump and line parameters. Defaults are the experimental values."""

    epsilon: float
    omega_d: float = DEFAULT_OMEGA_D
    l_eff0: float = DEFAULT_L_EFF0
    v: float = DEFAULT_V
    delta_omega: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.epsilon < 1.0:
            raise ValueError(f"epsilon must lie in [0, 1), got {self.epsilon}")
        for name in ("omega_d", "l_eff0", "v"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")

    @property
    def f(self) -> float:
        return small_parameter_f(self)

    @property
    def perturbative(self) -> bool:
        return self.f < PERTURBATIVE_F_MAX


@dataclass(frozen=True)
class ThermalEnvironment:
    temperature: float  # kelvin
    convention: Convention = Convention.CALIBRATED

    def __post_init__(self):
        if not self.temperature > 0:
            raise ValueError(f"temperature must be positive, got {self.temperature}")
        object.__setattr__(self, "convention", Convention(self.convention))


def small_parameter_f(drive: DriveConfig) -> float:
    """``f = epsilon L_eff0 omega_d / (2 v)``."""
    return drive.epsilon * drive.l_eff0 * drive.omega_d / (2.0 * drive.v)


def epsilon_from_f(f, omega_d=DEFAULT_OMEGA_D, l_eff0=DEFAULT_L_EFF0, v=DEFAULT_V) -> float:
    return 2.0 * v * f / (l_eff0 * omega_d)


def bose_einstein(temperature: float, omega: float) -> float:
    return 1.0 / math.expm1(HBAR * omega / (K_B * temperature))


def thermal_occupation(env: ThermalEnvironment, omega: float) -> float:
    if not omega > 0:
        raise ValueError(f"omega must be positive, got {omega}")
    n = bose_einstein(env.temperature, omega)
    return 2.0 * n if env.convention is Convention.CALIBRATED else n


def temperature_for_occupation(n_th: float, omega: float, convention=Convention.CALIBRATED) -> float:
    """Inverse of :func:`thermal_occupation`."""
    if not n_th > 0:
        raise ValueError(f"occupation must be positive, got {n_th}")
    scale = 2.0 if Convention(convention) is Convention.CALIBRATED else 1.0
    return HBAR * omega / (K_B * math.log1p(scale / n_th))


def input_cm(n_minus: float, n_plus: float) -> CovarianceMatrix:
    """Product of thermal states on the ``-`` and ``+`` modes."""
    if n_minus < 0 or n_plus < 0:
        raise ValueError(f"occupations must be non-negative, got {n_minus}, {n_plus}")
    return CovarianceMatrix.thermal(n_minus, n_plus)


def bogoliubov_quadrature_map(f: float) -> QuadratureMap:
    """``q_+- -> -(q_+- + f p_-+)``, ``p_+- -> -(p_+- + f q_-+)``.

    First order in ``f`` only, so the map violates the symplectic condition
    at order ``f**2``; :meth:`QuadratureMap.symplecticity_defect` reports it.
    """
    if not 0.0 <= f < 1.0:
        raise ValueError(f"f must lie in [0, 1), got {f}")
    m = -np.array(
        [
            [1.0, 0.0, 0.0, f],
            [0.0, 1.0, f, 0.0],
            [0.0, f, 1.0, 0.0],
            [f, 0.0, 0.0, 1.0],
        ]
    )
    return QuadratureMap(m, f"first-order DCE Bogoliubov map, f={f:g}")


def literal_output_cm(f: float, n_minus: float, n_plus: float | None = None) -> CovarianceMatrix:
    """Output CM written entry by entry (no matrix products)."""
    if n_plus is None:
        n_plus = n_minus
    s_minus = ((2 * n_plus + 1) * f * f + 2 * n_minus + 1) / 2
    s_plus = ((2 * n_minus + 1) * f * f + 2 * n_plus + 1) / 2
    c = f * (n_plus + n_minus + 1)
    return CovarianceMatrix(
        np.array(
            [
                [s_minus, 0.0, 0.0, c],
                [0.0, s_minus, c, 0.0],
                [0.0, c, s_plus, 0.0],
                [c, 0.0, 0.0, s_plus],
            ]
        )
    )


def dce_cm(f: float, n_th: float) -> CovarianceMatrix:
    """Output CM for equal input occupations, built by congruence."""
    return bogoliubov_quadrature_map(f).apply(input_cm(n_th, n_th))


@dataclass(frozen=True, eq=False)
class DceState:
    cm: CovarianceMatrix
    f: float
    n_th: float
    drive: DriveConfig | None = None
    env: ThermalEnvironment | None = None
    diagnostics: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if not self.cm.allclose(literal_output_cm(self.f, self.n_th), atol=1e-15 * max(1.0, 1 + 2 * self.n_th)):
            raise ValueError("covariance matrix does not match the (f, n_th) output state")

    @property
    def map_defect(self) -> float:
        return bogoliubov_quadrature_map(self.f).symplecticity_defect()

    @classmethod
    def from_parameters(cls, f: float, n_th: float, drive=None, env=None, warn=True) -> DceState:
        diagnostics = []
        if f >= PERTURBATIVE_F_MAX:
            msg = f"f = {f:.6g} >= {PERTURBATIVE_F_MAX}: outside the perturbative regime"
            if warn:
                warnings.warn(msg, PerturbativeRangeWarning, stacklevel=3)
            diagnostics.append(msg)
        cm = dce_cm(f, n_th)
        if not cm.allclose(literal_output_cm(f, n_th), atol=1e-12):
            raise AssertionError("congruence and literal output CM disagree")
        # symmetric state: the choice of measured mode in the discord is immaterial
        assert np.allclose(cm.mode_block(0), cm.mode_block(1), rtol=0, atol=1e-15)
        return cls(cm, f, n_th, drive, env, tuple(diagnostics))


def output_state(drive: DriveConfig, env: ThermalEnvironment, warn: bool = True) -> DceState:
    """Output state for equal occupations at ``omega_d / 2``.

    Outside the perturbative range a :class:`PerturbativeRangeWarning` is
    issued (unless ``warn`` is false) and recorded in the state's diagnostics.
    """
    f = small_parameter_f(drive)
    n_th = thermal_occupation(env, drive.omega_d / 2.0)
    return DceState.from_parameters(f, n_th, drive, env, warn)


def perturbative_negativity(f: float, n_th: float) -> float:
    _check_nonneg(f=f, n_th=n_th)
    return max(0.0, 2.0 * (f - n_th))


def perturbative_discord(f: float, n_th: float) -> float:
    _check_nonneg(f=f, n_th=n_th)
    return max(0.0, f * f - n_th * n_th / 2.0)


def perturbative_coherence(f: float, n_th: float, diagnostics: list[str] | None = None) -> float:
    """Leading-order coherence ``2 f^2 (n - (2n+1) ln n)``.

    The expansion diverges at ``n_th = 0``; there the value from the full
    covariance-matrix pipeline is returned instead and the substitution is
    reported through ``diagnostics``.
    """
    _check_nonneg(f=f, n_th=n_th)
    if f == 0.0:
        return 0.0
    if n_th == 0.0:
        if diagnostics is not None:
            diagnostics.append("perturbative coherence diverges at n_th = 0; exact value substituted")
        return gaussian_coherence(dce_cm(f, 0.0), diagnostics)
    return max(0.0, -2.0 * f * f * (-n_th + (2.0 * n_th + 1.0) * math.log(n_th)))


def _check_nonneg(**values):
    for name, value in values.items():
        if value < 0:
            raise ValueError(f"{name} must be non-negative, got {value}")
