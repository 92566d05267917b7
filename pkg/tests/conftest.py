"""
Shared test fixtures and utilities for the SpinXfer test suite.

This module provides common fixtures used across multiple test files:
- Chain specifications for small AFM and FM chains
- Néel, FM-ground and custom branch pairs
- Bloch-sphere quadrature for checking averaged fidelities
"""

import numpy as np
import pytest

from src.models.channels import custom_channel, fm_ground_channel, neel_channel
from src.models.schemas import ChainSpec


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long acceptance runs over full time windows")


# ============================================================================
# Chain Fixtures
# ============================================================================

@pytest.fixture
def chain6():
    """Six-site AFM chain in a unit field."""
    return ChainSpec(n_sites=6, coupling=1.0, field=1.0)


@pytest.fixture
def chain7_fm():
    """Seven-site ferromagnetic chain in a small field."""
    return ChainSpec(n_sites=7, coupling=-1.0, field=0.3)


@pytest.fixture
def neel6():
    return neel_channel(6)


@pytest.fixture
def fm6():
    return fm_ground_channel(6)


@pytest.fixture
def sample_pairs():
    """A spread of channels for N = 2..8, including empty and dense patterns."""
    return [
        (2, fm_ground_channel(2)),
        (2, neel_channel(2)),
        (3, neel_channel(3)),
        (5, custom_channel(5, [3, 4])),
        (6, neel_channel(6)),
        (7, custom_channel(7, [2, 3, 5, 7])),
        (8, custom_channel(8, [2, 3, 4, 5, 6, 7, 8])),
    ]


# ============================================================================
# Utilities
# ============================================================================

def bloch_quadrature(n_theta: int = 24, n_phi: int = 24):
    """
    Gauss-Legendre in cos(theta) times uniform phi.

    Yields (alpha, beta, weight) for alpha|0> + beta|1>, weights summing to 1.
    """
    nodes, weights = np.polynomial.legendre.leggauss(n_theta)
    phis = 2.0 * np.pi * np.arange(n_phi) / n_phi
    for x, w in zip(nodes, weights):
        theta = np.arccos(x)
        for phi in phis:
            alpha = np.cos(theta / 2)
            beta = np.exp(1j * phi) * np.sin(theta / 2)
            yield alpha, beta, w / (2.0 * n_phi)


def closed_form_fidelity(f1n: complex, m1: int, strict: bool = True) -> float:
    """Average fidelity from the end-to-end amplitude and the channel parity."""
    sign = -1.0 if m1 % 2 else 1.0
    coherence = sign * np.conj(f1n) if strict else abs(f1n)
    return float(0.5 + abs(f1n) ** 2 / 6.0 + np.real(coherence) / 3.0)
