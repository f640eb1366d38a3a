import numpy as np
import pytest
from hypothesis import strategies as st

from casimir_coherence.symplectic import (
    CovarianceMatrix,
    beamsplitter,
    phase_rotation,
    single_mode_squeezer,
    two_mode_squeezer,
)

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_symplectic(rng, n_modes=2, max_r=0.8):
    """Product of random rotations, squeezers, beam splitters and two-mode squeezers."""
    m = np.eye(2 * n_modes)
    for _ in range(3):
        for k in range(n_modes):
            m = phase_rotation(rng.uniform(0, 2 * np.pi), k, n_modes) @ m
            m = single_mode_squeezer(rng.uniform(-max_r, max_r), k, n_modes) @ m
        if n_modes >= 2:
            m = beamsplitter(rng.uniform(0, 2 * np.pi), (0, 1), n_modes) @ m
            m = two_mode_squeezer(rng.uniform(-max_r, max_r), (0, 1), n_modes) @ m
    return m


def random_bona_fide(rng, n_modes=2):
    """Random CM with known symplectic spectrum; returns (cm, sorted spectrum)."""
    nus = 0.5 + rng.exponential(0.7, size=n_modes)
    s = random_symplectic(rng, n_modes)
    cm = CovarianceMatrix(s @ np.diag(np.repeat(nus, 2)) @ s.T)
    return cm, np.sort(nus)


@st.composite
def bona_fide_cms(draw, n_modes=2):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_bona_fide(np.random.default_rng(seed), n_modes)


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)
