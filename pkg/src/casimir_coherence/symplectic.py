"""Covariance matrices of zero-mean Gaussian states and symplectic linear algebra.

Quadratures are ordered ``(q_1, p_1, ..., q_N, p_N)`` and covariance matrices are
stored with the vacuum normalised to ``0.5 * identity``. Entropies are in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .errors import NumericalFailure

#: absolute symmetry tolerance used when validating raw matrices
SYMMETRY_TOL = 1e-12
#: bona fide threshold on the smallest doubled symplectic eigenvalue
BONA_FIDE_TOL = 1e-9
#: arguments of the entropy function in [1 - H_CLAMP_TOL, 1) are rounding noise
H_CLAMP_TOL = 1e-6
#: relative tolerance of the internal two-mode closed-form cross-check
CROSS_CHECK_TOL = 1e-9


def _frozen(a):
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """Second-moment matrix of an ``N``-mode Gaussian state.

    The input is symmetrised on construction; inputs whose asymmetry exceeds
    a relative tolerance of ``1e-9`` are rejected.
    """

    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] % 2 or a.shape[0] == 0:
            raise ValueError(f"covariance matrix must be 2N x 2N, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("covariance matrix has non-finite entries")
        scale = max(1.0, float(np.max(np.abs(a))))
        asym = float(np.max(np.abs(a - a.T)))
        if asym > 1e-9 * scale:
            raise ValueError(f"covariance matrix is not symmetric (max asymmetry {asym:.3g})")
        object.__setattr__(self, "entries", _frozen(0.5 * (a + a.T)))

    @property
    def n_modes(self) -> int:
        return self.entries.shape[0] // 2

    def mode_block(self, k: int) -> np.ndarray:
        """Local 2x2 covariance matrix of mode ``k`` (0-based)."""
        self._check_mode(k)
        return self.entries[2 * k:2 * k + 2, 2 * k:2 * k + 2]

    def correlation_block(self, j: int, k: int) -> np.ndarray:
        """Off-diagonal 2x2 block between modes ``j`` and ``k``."""
        self._check_mode(j)
        self._check_mode(k)
        return self.entries[2 * j:2 * j + 2, 2 * k:2 * k + 2]

    def congruence(self, matrix) -> CovarianceMatrix:
        """Return ``M sigma M^T``."""
        m = np.asarray(matrix, dtype=float)
        if m.shape != self.entries.shape:
            raise ValueError(f"map of shape {m.shape} does not act on a {self.entries.shape} matrix")
        return CovarianceMatrix(m @ self.entries @ m.T)

    def allclose(self, other, atol=1e-12) -> bool:
        other = other.entries if isinstance(other, CovarianceMatrix) else np.asarray(other)
        return other.shape == self.entries.shape and bool(np.allclose(self.entries, other, rtol=0, atol=atol))

    def _check_mode(self, k):
        if not 0 <= k < self.n_modes:
            raise IndexError(f"mode index {k} out of range for {self.n_modes} modes")

    @classmethod
    def vacuum(cls, n_modes: int) -> CovarianceMatrix:
        if n_modes < 1:
            raise ValueError("n_modes must be >= 1")
        return cls(0.5 * np.eye(2 * n_modes))

    @classmethod
    def thermal(cls, *occupations: float) -> CovarianceMatrix:
        """Product of thermal states with the given mean photon numbers."""
        if not occupations:
            raise ValueError("need at least one occupation")
        if any(n < 0 for n in occupations):
            raise ValueError("occupations must be non-negative")
        return cls(np.diag(np.repeat([n + 0.5 for n in occupations], 2)))

    @classmethod
    def direct_sum(cls, *cms: CovarianceMatrix) -> CovarianceMatrix:
        size = sum(c.entries.shape[0] for c in cms)
        out = np.zeros((size, size))
        i = 0
        for c in cms:
            d = c.entries.shape[0]
            out[i:i + d, i:i + d] = c.entries
            i += d
        return cls(out)


@dataclass(frozen=True)
class SymplecticSpectrum:
    """Symplectic eigenvalues (ascending) plus the bona fide verdict."""

    eigenvalues: tuple[float, ...]
    bona_fide: bool
    min_violation: float

    @property
    def smallest(self) -> float:
        return self.eigenvalues[0]


@dataclass(frozen=True, eq=False)
class QuadratureMap:
    """Linear map acting on the quadrature vector; not necessarily symplectic."""

    matrix: np.ndarray
    description: str = ""

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
            raise ValueError(f"quadrature map must be 2N x 2N, got shape {m.shape}")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] // 2

    def symplecticity_defect(self) -> float:
        return symplecticity_defect(self.matrix)

    def apply(self, cm: CovarianceMatrix) -> CovarianceMatrix:
        return cm.congruence(self.matrix)


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal symplectic form with ``n_modes`` copies of ``[[0, 1], [-1, 0]]``."""
    if int(n_modes) != n_modes or n_modes < 1:
        raise ValueError(f"n_modes must be a positive integer, got {n_modes!r}")
    return np.kron(np.eye(int(n_modes)), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def symplecticity_defect(matrix) -> float:
    """Max-norm of ``M Omega M^T - Omega``."""
    m = np.asarray(matrix, dtype=float)
    omega = symplectic_form(m.shape[0] // 2)
    return float(np.max(np.abs(m @ omega @ m.T - omega)))


def _spectrum(nus):
    nus = tuple(sorted(float(v) for v in nus))
    violation = max(0.0, 1.0 - 2.0 * nus[0])
    return SymplecticSpectrum(nus, violation <= BONA_FIDE_TOL, violation)


def two_mode_closed_form(cm: CovarianceMatrix) -> tuple[float, float]:
    """Symplectic eigenvalues of a two-mode CM from ``det(sigma)`` and the seralian."""
    delta = seralian(cm)
    det = float(np.linalg.det(cm.entries))
    disc = math.sqrt(max(delta * delta - 4.0 * det, 0.0))
    lo = max((delta - disc) / 2.0, 0.0)
    return math.sqrt(lo), math.sqrt((delta + disc) / 2.0)


def symplectic_eigenvalues(cm: CovarianceMatrix) -> SymplecticSpectrum:
    """Absolute values of the eigenvalues of ``i Omega sigma``, one per mode.

    For one and two modes the result is checked against the global invariants
    (``det sigma = prod nu^2`` and, for two modes, ``seralian = sum nu^2``);
    a mismatch raises :class:`NumericalFailure`.
    """
    n = cm.n_modes
    try:
        ev = np.linalg.eigvals(1j * symplectic_form(n) @ cm.entries)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigendecomposition failed: {exc}") from exc
    if not np.all(np.isfinite(ev)):
        raise NumericalFailure("eigendecomposition returned non-finite values")

    scale = max(1.0, float(np.max(np.abs(cm.entries))))
    mags = np.sort(np.abs(ev))
    pair_residual = float(np.max(np.abs(mags[0::2] - mags[1::2])))
    imag_residual = float(np.max(np.abs(ev.imag)))
    residual = max(pair_residual, imag_residual)
    if residual > 1e-7 * scale:
        raise NumericalFailure(
            f"eigenvalues of i*Omega*sigma do not form real +/- pairs (residual {residual:.3g})",
            residual,
        )
    nus = 0.5 * (mags[0::2] + mags[1::2])

    if n <= 2:
        det = float(np.linalg.det(cm.entries))
        checks = [(float(np.prod(nus ** 2)), det)]
        if n == 2:
            checks.append((float(np.sum(nus ** 2)), seralian(cm)))
        for got, want in checks:
            tol = CROSS_CHECK_TOL * abs(want) + 1e-14 * scale ** (2 * n)
            if abs(got - want) > tol:
                raise NumericalFailure(
                    f"symplectic spectrum fails closed-form check ({got!r} vs {want!r})",
                    abs(got - want),
                )
    return _spectrum(nus)


def seralian(cm: CovarianceMatrix) -> float:
    """``det sigma_1 + det sigma_2 + 2 det eps_12`` for a two-mode CM."""
    if cm.n_modes != 2:
        raise ValueError(f"seralian needs exactly 2 modes, got {cm.n_modes}")
    return det2(cm.mode_block(0)) + det2(cm.mode_block(1)) + 2.0 * det2(cm.correlation_block(0, 1))


def det2(m) -> float:
    """Determinant of a 2x2 block, computed directly (no LU, exact for diagonal blocks)."""
    return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def partial_transpose(cm: CovarianceMatrix, which_mode: int = 1) -> CovarianceMatrix:
    """Flip the sign of the momentum of ``which_mode`` (0-based)."""
    cm._check_mode(which_mode)
    sign = np.ones(2 * cm.n_modes)
    sign[2 * which_mode + 1] = -1.0
    return CovarianceMatrix(cm.entries * np.outer(sign, sign))


def entropy_h(x: float) -> float:
    """Entropy of a single mode whose doubled symplectic eigenvalue is ``x``.

    ``x = 1`` is the vacuum. Arguments below 1 have no physical meaning and
    return 0; callers that can see such arguments report them.
    """
    if x <= 1.0:
        return 0.0
    a = (x + 1.0) / 2.0
    b = (x - 1.0) / 2.0
    return float(xlogy(a, a) - xlogy(b, b))


def thermal_entropy(n: float) -> float:
    """``(n+1) ln(n+1) - n ln n``, the entropy of a thermal state with mean ``n``."""
    if n < 0:
        raise ValueError(f"occupation must be non-negative, got {n}")
    return float(xlogy(n + 1.0, n + 1.0) - xlogy(n, n))


def von_neumann_entropy(cm: CovarianceMatrix, diagnostics: list[str] | None = None) -> float:
    """Von Neumann entropy in nats.

    Symplectic eigenvalues below the vacuum value contribute zero. When this
    happens beyond rounding noise a message is appended to ``diagnostics``.
    """
    total = 0.0
    for k, nu in enumerate(symplectic_eigenvalues(cm).eigenvalues):
        x = 2.0 * nu
        if x < 1.0 - H_CLAMP_TOL and diagnostics is not None:
            diagnostics.append(
                f"entropy: 2*nu_{k} = {x:.6g} < 1 (state is not bona fide), term set to 0"
            )
        total += entropy_h(x)
    return total


def mean_occupation(cm: CovarianceMatrix, mode: int) -> float:
    """Mean photon number of ``mode`` for a zero-mean state."""
    block = cm.mode_block(mode)
    n = 0.5 * (block[0, 0] + block[1, 1] - 1.0)
    if n < 0:
        if n < -1e-9:
            raise ValueError(f"mode {mode} has unphysical mean occupation {n:.3g}")
        n = 0.0
    return float(n)


# -- elementary symplectic maps ---------------------------------------------


def _embed(block, modes, n_modes):
    m = np.eye(2 * n_modes)
    idx = np.concatenate([[2 * k, 2 * k + 1] for k in modes])
    m[np.ix_(idx, idx)] = block
    return m


def phase_rotation(phi: float, mode: int = 0, n_modes: int = 1) -> np.ndarray:
    """Phase-space rotation ``q -> q cos(phi) + p sin(phi)`` on one mode."""
    c, s = math.cos(phi), math.sin(phi)
    return _embed(np.array([[c, s], [-s, c]]), [mode], n_modes)


def single_mode_squeezer(r: float, mode: int = 0, n_modes: int = 1) -> np.ndarray:
    return _embed(np.diag([math.exp(-r), math.exp(r)]), [mode], n_modes)


def two_mode_squeezer(r: float, modes=(0, 1), n_modes: int = 2) -> np.ndarray:
    """Two-mode squeezer; acting on the vacuum gives a TMSV with ``<q1 q2> > 0``."""
    ch, sh = math.cosh(r), math.sinh(r)
    z = np.diag([1.0, -1.0])
    block = np.block([[ch * np.eye(2), sh * z], [sh * z, ch * np.eye(2)]])
    return _embed(block, list(modes), n_modes)


def beamsplitter(theta: float, modes=(0, 1), n_modes: int = 2) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    block = np.block([[c * np.eye(2), s * np.eye(2)], [-s * np.eye(2), c * np.eye(2)]])
    return _embed(block, list(modes), n_modes)
