"""
SpinXfer Services Module
Propagator, fidelity evaluators, the spin-space oracle and experiment drivers.
"""

from .propagator import amplitude_matrix, single_amplitude, spectrum
from .fidelity import (
    average_fidelity,
    gamma_direct,
    gamma_fast,
    occupation_profile,
    single_excitation_fidelity,
)
from .oracle import build_hamiltonian, evolve_full, gamma_oracle, reduced_density_site_n
from .experiments import (
    aligned_coherence,
    compare_channels,
    find_fmax,
    ordering_study,
    sweep_time_field,
)
from .verification import require_passed, verify_equivalence

__all__ = [
    "amplitude_matrix",
    "single_amplitude",
    "spectrum",
    "average_fidelity",
    "gamma_direct",
    "gamma_fast",
    "occupation_profile",
    "single_excitation_fidelity",
    "build_hamiltonian",
    "evolve_full",
    "gamma_oracle",
    "reduced_density_site_n",
    "aligned_coherence",
    "compare_channels",
    "find_fmax",
    "ordering_study",
    "sweep_time_field",
    "require_passed",
    "verify_equivalence",
]
