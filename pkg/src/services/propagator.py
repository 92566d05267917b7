"""
Free-Fermion Propagator
Transition amplitudes f_{k,l}(t) of the uniform open XY chain.

After the Jordan-Wigner mapping the chain is a tight-binding model whose
eigenmodes are standing waves sin(q_m k) with q_m = pi m/(N+1) and energies
E_m = 2h + 2J cos q_m. A creation operator evolves as
c_k^dagger(t) = sum_l f_{k,l}(t) c_l^dagger with

    f_{k,l}(t) = 2/(N+1) sum_m sin(q_m k) sin(q_m l) exp(-i E_m t).

The sine transform only depends on N and is cached; time enters through the
N phase factors.
"""

import logging
import math
from functools import lru_cache
from typing import Sequence

import numpy as np

from src.models.errors import InvalidArgumentError
from src.models.schemas import AmplitudeMatrix, ChainSpec, SpectralData

logger = logging.getLogger(__name__)


@lru_cache(maxsize=64)
def sine_modes(n_sites: int) -> np.ndarray:
    """
    Orthonormal mode matrix U[k-1, m-1] = sqrt(2/(N+1)) sin(q_m k).

    The returned array is read-only and shared between callers.
    """
    sites = np.arange(1, n_sites + 1)
    q = np.pi * sites / (n_sites + 1)
    modes = math.sqrt(2.0 / (n_sites + 1)) * np.sin(np.outer(sites, q))
    modes.setflags(write=False)
    logger.debug(f"Cached sine modes for N={n_sites}")
    return modes


def spectrum(spec: ChainSpec) -> SpectralData:
    """Momenta q_m and single-particle energies E_m for m = 1..N."""
    m = np.arange(1, spec.n_sites + 1)
    momenta = np.pi * m / (spec.n_sites + 1)
    energies = 2.0 * spec.field + 2.0 * spec.coupling * np.cos(momenta)
    return SpectralData(momenta=momenta, energies=energies)


def _check_time(t: float) -> float:
    t = float(t)
    if not math.isfinite(t):
        raise InvalidArgumentError(f"time must be finite, got {t}", field="t")
    return t


def amplitude_batch(spec: ChainSpec, times: Sequence[float]) -> np.ndarray:
    """
    Amplitude matrices for many times at once.

    Returns:
        Complex array of shape (len(times), N, N) with [i, k-1, l-1] = f_{k,l}(times[i])
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if not np.all(np.isfinite(times)):
        raise InvalidArgumentError("times must be finite", field="times")
    modes = sine_modes(spec.n_sites)
    energies = spectrum(spec).energies
    phases = np.exp(-1j * np.outer(times, energies))
    return np.einsum("km,tm,lm->tkl", modes, phases, modes, optimize=True)


def amplitude_matrix(spec: ChainSpec, t: float) -> AmplitudeMatrix:
    """Full N x N amplitude matrix at time t (symmetric and unitary)."""
    t = _check_time(t)
    modes = sine_modes(spec.n_sites)
    phases = np.exp(-1j * spectrum(spec).energies * t)
    entries = (modes * phases) @ modes.T
    return AmplitudeMatrix(time=t, entries=entries)


def single_amplitude(spec: ChainSpec, k: int, l: int, t: float) -> complex:
    """One amplitude f_{k,l}(t) in O(N)."""
    t = _check_time(t)
    for name, site in (("k", k), ("l", l)):
        if not 1 <= site <= spec.n_sites:
            raise InvalidArgumentError(
                f"site {site} outside [1, {spec.n_sites}]",
                field=name,
            )
    modes = sine_modes(spec.n_sites)
    phases = np.exp(-1j * spectrum(spec).energies * t)
    return complex(np.sum(modes[k - 1] * modes[l - 1] * phases))
