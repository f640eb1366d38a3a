"""Brute-force truncated Fock-space oracle for two-mode states.

Density matrices live on ``|n1, n2>`` with ``n1, n2 < cutoff`` in
lexicographic order. Nothing here touches the covariance-matrix code paths
except :func:`cm_of_tmsv` and :func:`quadrature_covariance`, which bridge the
two pictures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SupportError, TruncationError
from .symplectic import CovarianceMatrix, phase_rotation

MAX_CUTOFF = 40
TAIL_TOL = 1e-8
EIG_FLOOR = 1e-14
#: rho weight tolerated on eigenvectors of sigma below EIG_FLOOR
SUPPORT_TOL = 1e-6

#: local rotation of the second mode taking the TMSV correlation block
#: ``diag(c, -c)`` to the DCE form ``[[0, c], [c, 0]]``
DCE_FRAME_ROTATION = phase_rotation(-math.pi / 2, mode=1, n_modes=2)


@dataclass(frozen=True, eq=False)
class FockDensityMatrix:
    cutoff: int
    entries: np.ndarray

    def __post_init__(self):
        d = self.cutoff
        rho = np.asarray(self.entries, dtype=complex)
        if rho.shape != (d * d, d * d):
            raise ValueError(f"expected a {d*d}x{d*d} matrix for cutoff {d}, got {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(rho).real - 1.0) > 1e-10:
            raise ValueError(f"density matrix has trace {np.trace(rho).real}")
        rho = 0.5 * (rho + rho.conj().T)
        rho.setflags(write=False)
        object.__setattr__(self, "entries", rho)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)

    def purity(self) -> float:
        return float(np.real(np.trace(self.entries @ self.entries)))

    def reduced(self, keep: int) -> np.ndarray:
        """Partial trace onto mode ``keep`` (0 or 1)."""
        d = self.cutoff
        t = self.entries.reshape(d, d, d, d)
        if keep == 0:
            return np.einsum("ijkj->ik", t)
        if keep == 1:
            return np.einsum("jijk->ik", t)
        raise IndexError(f"mode index {keep} out of range")

    def top_level_population(self) -> float:
        """Largest population of the highest retained Fock level of either mode."""
        d = self.cutoff
        return float(max(self.reduced(0)[d - 1, d - 1].real, self.reduced(1)[d - 1, d - 1].real))


def tmsv_state(r: float, cutoff: int) -> FockDensityMatrix:
    """Two-mode squeezed vacuum ``sech r sum_k tanh(r)^k |k, k>``."""
    if not 0.0 <= r <= 0.3:
        raise ValueError(f"squeezing must lie in [0, 0.3], got {r}")
    _check_cutoff(cutoff)
    t = math.tanh(r)
    if t ** (2 * cutoff) >= 1e-12:
        raise TruncationError(f"cutoff {cutoff} too small for r={r}: tail tanh^2d = {t ** (2 * cutoff):.3g}")
    amps = t ** np.arange(cutoff)
    amps /= np.linalg.norm(amps)
    psi = np.zeros(cutoff * cutoff)
    psi[np.arange(cutoff) * (cutoff + 1)] = amps
    return FockDensityMatrix(cutoff, np.outer(psi, psi))


def thermal_populations(n: float, cutoff: int) -> np.ndarray:
    if n < 0:
        raise ValueError(f"occupation must be non-negative, got {n}")
    _check_cutoff(cutoff)
    if n == 0:
        p = np.zeros(cutoff)
        p[0] = 1.0
        return p
    ratio = n / (n + 1.0)
    tail = ratio ** cutoff
    if tail >= TAIL_TOL:
        raise TruncationError(f"cutoff {cutoff} too small for n={n}: tail {tail:.3g}")
    p = ratio ** np.arange(cutoff) / (n + 1.0)
    return p / p.sum()


def thermal_product_state(n1: float, n2: float, cutoff: int) -> FockDensityMatrix:
    p = np.kron(thermal_populations(n1, cutoff), thermal_populations(n2, cutoff))
    return FockDensityMatrix(cutoff, np.diag(p))


def minimal_cutoff(n: float) -> int:
    """Smallest cutoff with thermal tail below ``TAIL_TOL``, capped at ``MAX_CUTOFF``."""
    d = 1
    while n > 0 and (n / (n + 1.0)) ** d >= TAIL_TOL:
        d += 1
    if d > MAX_CUTOFF:
        raise TruncationError(f"occupation {n} needs cutoff {d} > {MAX_CUTOFF}")
    return d


def partial_transpose(rho: FockDensityMatrix, partition: int = 1) -> np.ndarray:
    d = rho.cutoff
    t = rho.entries.reshape(d, d, d, d)
    if partition == 1:
        t = t.transpose(0, 3, 2, 1)
    elif partition == 0:
        t = t.transpose(2, 1, 0, 3)
    else:
        raise IndexError(f"partition {partition} out of range")
    return t.reshape(d * d, d * d)


def fock_log_negativity(rho: FockDensityMatrix, partition: int = 1) -> float:
    """Natural log of the trace norm of the partial transpose."""
    ev = np.linalg.eigvalsh(partial_transpose(rho, partition))
    return float(math.log(np.sum(np.abs(ev))))


def fock_entropy(rho) -> float:
    m = rho.entries if isinstance(rho, FockDensityMatrix) else np.asarray(rho)
    w = np.linalg.eigvalsh(m)
    w = w[w > EIG_FLOOR]
    return float(-np.sum(w * np.log(w)))


def relative_entropy(rho: FockDensityMatrix, sigma: FockDensityMatrix) -> float:
    """``tr(rho ln rho) - tr(rho ln sigma)`` in nats."""
    if rho.cutoff != sigma.cutoff:
        raise ValueError("states have different cutoffs")
    ws, vs = np.linalg.eigh(sigma.entries)
    floored = ws <= EIG_FLOOR
    # weight of rho on the (numerically) null space of sigma
    null = vs[:, floored]
    leak = float(np.real(np.trace(null.conj().T @ rho.entries @ null))) if null.size else 0.0
    if leak > SUPPORT_TOL:
        raise SupportError(f"rho has weight {leak:.3g} outside the support of sigma")
    log_sigma = (vs * np.log(np.maximum(ws, EIG_FLOOR))) @ vs.conj().T
    cross = float(np.real(np.trace(rho.entries @ log_sigma)))
    return -fock_entropy(rho) - cross


def ladder_operators(cutoff: int):
    """Annihilation operators of both modes on the truncated two-mode space."""
    a = np.diag(np.sqrt(np.arange(1, cutoff)), 1)
    eye = np.eye(cutoff)
    return np.kron(a, eye), np.kron(eye, a)


def quadrature_covariance(rho: FockDensityMatrix) -> np.ndarray:
    """Symmetrised second moments of ``(q1, p1, q2, p2)`` minus mean products."""
    quads = []
    for a in ladder_operators(rho.cutoff):
        ad = a.conj().T
        quads += [(a + ad) / math.sqrt(2.0), 1j * (ad - a) / math.sqrt(2.0)]
    m = rho.entries
    rx = [m @ x for x in quads]
    means = [np.trace(r).real for r in rx]
    cov = np.empty((4, 4))
    for i, x in enumerate(quads):
        for j, y in enumerate(quads):
            # tr(rho x y) = sum((rho x) * y^T)
            sym = np.sum(rx[i] * y.T) + np.sum(rx[j] * x.T)
            cov[i, j] = 0.5 * sym.real - means[i] * means[j]
    return cov


def cm_of_tmsv(r: float) -> CovarianceMatrix:
    """CM of :func:`tmsv_state`: blocks ``cosh(2r)/2``, correlations ``diag(c, -c)``.

    ``c = sinh(2r)/2``. Congruence with :data:`DCE_FRAME_ROTATION` gives the
    anti-diagonal correlation pattern of the DCE output state.
    """
    if r < 0:
        raise ValueError(f"squeezing must be non-negative, got {r}")
    a = math.cosh(2 * r) / 2
    c = math.sinh(2 * r) / 2
    return CovarianceMatrix(
        np.array(
            [
                [a, 0.0, c, 0.0],
                [0.0, a, 0.0, -c],
                [c, 0.0, a, 0.0],
                [0.0, -c, 0.0, a],
            ]
        )
    )


def squeezing_from_f(f: float) -> float:
    """TMSV squeezing whose CM is the vacuum DCE CM up to the factor ``1 - f^2``."""
    return math.atanh(f)


def _check_cutoff(cutoff):
    if int(cutoff) != cutoff or not 1 <= cutoff <= MAX_CUTOFF:
        raise ValueError(f"cutoff must be an integer in [1, {MAX_CUTOFF}], got {cutoff}")
