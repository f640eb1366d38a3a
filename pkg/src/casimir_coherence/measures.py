"""Entanglement, discord and coherence of Gaussian states from their covariance matrix.

All values are in nats. Every function clamps its result at zero; when the
unclamped value is negative beyond rounding, or when an intermediate argument
falls outside the physical range, a message is appended to the optional
``diagnostics`` list instead of raising.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


from .symplectic import (
    H_CLAMP_TOL,
    CovarianceMatrix,
    det2,
    entropy_h,
    mean_occupation,
    partial_transpose,
    symplectic_eigenvalues,
    thermal_entropy,
    von_neumann_entropy,
)

#: unclamped values within this distance of zero are rounding noise
ZERO_TOL = 1e-12


def _clamp(name, raw, diagnostics):
    if abs(raw) <= ZERO_TOL:
        return 0.0
    if raw < 0:
        if diagnostics is not None:
            diagnostics.append(f"{name}: unclamped value {raw:.6g} < 0, clamped to 0")
        return 0.0
    return float(raw)


def _require_two_modes(cm, what):
    if cm.n_modes != 2:
        raise ValueError(f"{what} is defined for two-mode states, got {cm.n_modes} modes")


def _h_checked(x, label, diagnostics):
    if x < 1.0 - H_CLAMP_TOL and diagnostics is not None:
        diagnostics.append(f"discord: h argument {label} = {x:.6g} < 1, term set to 0")
    return entropy_h(x)


def pt_min_eigenvalue(cm: CovarianceMatrix) -> float:
    """Smallest symplectic eigenvalue of the partially transposed CM."""
    _require_two_modes(cm, "partial transposition")
    return symplectic_eigenvalues(partial_transpose(cm, 1)).smallest


def log_negativity(cm: CovarianceMatrix, diagnostics: list[str] | None = None) -> float:
    """``max(0, -ln(2 nu_pt))`` for a two-mode state."""
    raw = -math.log(2.0 * pt_min_eigenvalue(cm))
    return _clamp("negativity", raw, diagnostics)


def gaussian_discord(
    cm: CovarianceMatrix,
    diagnostics: list[str] | None = None,
    measured_mode: int = 1,
) -> float:
    """Closed-form Gaussian discord with ``measured_mode`` as the measured party.

    The invariants are taken from the stored (vacuum = 1/2) matrix; each
    argument of the entropy function is doubled to the vacuum = 1 scale.
    """
    _require_two_modes(cm, "discord")
    other = 1 - measured_mode
    det_a = det2(cm.mode_block(other))
    det_b = det2(cm.mode_block(measured_mode))
    det_c = det2(cm.correlation_block(0, 1))
    nus = symplectic_eigenvalues(cm).eigenvalues

    sqrt_a = math.sqrt(max(det_a, 0.0))
    sqrt_b = math.sqrt(max(det_b, 0.0))
    conditional = (sqrt_a + 2.0 * sqrt_a * sqrt_b + 2.0 * det_c) / (1.0 + 2.0 * sqrt_b)

    raw = (
        _h_checked(2.0 * sqrt_b, "2*sqrt(det sigma_B)", diagnostics)
        - _h_checked(2.0 * nus[0], "2*nu_1", diagnostics)
        - _h_checked(2.0 * nus[1], "2*nu_2", diagnostics)
        + _h_checked(2.0 * conditional, "conditional", diagnostics)
    )
    return _clamp("discord", raw, diagnostics)


def gaussian_coherence(cm: CovarianceMatrix, diagnostics: list[str] | None = None) -> float:
    """Relative entropy of coherence: ``-S(sigma) + sum_k g(nbar_k)``.

    Works for any number of modes; the minimising incoherent state is the
    product of thermal states with the marginal mean occupations.
    """
    s = von_neumann_entropy(cm, diagnostics)
    marginals = sum(thermal_entropy(mean_occupation(cm, k)) for k in range(cm.n_modes))
    return _clamp("coherence", marginals - s, diagnostics)


@dataclass(frozen=True)
class MeasureReport:
    negativity: float
    discord: float
    coherence: float
    symplectic_eigenvalues: tuple[float, ...]
    pt_min_eigenvalue: float
    mean_occupations: tuple[float, ...]
    bona_fide: bool
    diagnostics: tuple[str, ...]

    def as_dict(self) -> dict:
        return {
            "negativity": self.negativity,
            "discord": self.discord,
            "coherence": self.coherence,
            "symplectic_eigenvalues": list(self.symplectic_eigenvalues),
            "pt_min_eigenvalue": self.pt_min_eigenvalue,
            "mean_occupations": list(self.mean_occupations),
            "bona_fide": self.bona_fide,
            "diagnostics": list(self.diagnostics),
        }


def measure_report(cm: CovarianceMatrix) -> MeasureReport:
    _require_two_modes(cm, "measure_report")
    diagnostics: list[str] = []
    spectrum = symplectic_eigenvalues(cm)
    if not spectrum.bona_fide:
        diagnostics.append(
            f"state is not bona fide: min(2*nu) falls below 1 by {spectrum.min_violation:.6g}"
        )
    negativity = log_negativity(cm, diagnostics)
    discord = gaussian_discord(cm, diagnostics)
    coherence = gaussian_coherence(cm, diagnostics)
    return MeasureReport(
        negativity=negativity,
        discord=discord,
        coherence=coherence,
        symplectic_eigenvalues=spectrum.eigenvalues,
        pt_min_eigenvalue=pt_min_eigenvalue(cm),
        mean_occupations=tuple(mean_occupation(cm, k) for k in range(2)),
        bona_fide=spectrum.bona_fide,
        diagnostics=tuple(dict.fromkeys(diagnostics)),
    )
