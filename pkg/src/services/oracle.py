"""
Exact-Diagonalization Oracle
Brute-force evolution of the XY chain on the full 2^N spin space.

Basis convention: a basis index is the bit string n_1 n_2 ... n_N with site 1
the most significant bit; bit value 1 means the site is excited (up, |1>).

Hamiltonian:
    H = (J/2) sum_l (X_l X_{l+1} + Y_l Y_{l+1}) - h sum_l Z_l

with Z = diag(1, -1) in the (|0>, |1>) computational basis. Each excitation
therefore costs +2h, matching the fermionic dispersion E_m = 2h + 2J cos q_m,
and inside the M-excitation block H = sum_m E_m n_m - hN (see spectrum_offset).
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Literal, Optional, Tuple

import numpy as np
import scipy.linalg
import scipy.sparse

from config.settings import settings
from src.models.errors import InvalidArgumentError, ResourceLimitError
from src.models.schemas import BranchPair, ChainSpec, ExcitationPattern, GammaSet

logger = logging.getLogger(__name__)

EvolutionMethod = Literal["auto", "full", "blocks"]


# ============================================================================
# Value Types
# ============================================================================

@dataclass(frozen=True)
class FullState:
    """State vector over the 2^N computational basis."""
    amplitudes: np.ndarray

    @property
    def n_sites(self) -> int:
        return int(self.amplitudes.size).bit_length() - 1

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass
class SpinHamiltonian:
    """
    Sparse Hermitian matrix of the chain plus cached eigendecompositions.

    The matrix is never modified after construction; eigensystems are filled
    in lazily per excitation sector.
    """
    spec: ChainSpec
    matrix: scipy.sparse.csr_matrix
    _eigen: Dict[Optional[int], Tuple[np.ndarray, np.ndarray]] = field(
        default_factory=dict, repr=False
    )

    @property
    def n_sites(self) -> int:
        return self.spec.n_sites

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def excitation_numbers(self) -> np.ndarray:
        return _popcounts(self.n_sites)

    def sector(self, excitations: int) -> np.ndarray:
        """Basis indices holding exactly `excitations` up spins."""
        return np.flatnonzero(self.excitation_numbers() == excitations)

    def eigensystem(self, excitations: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
        """Eigenvalues and eigenvectors of the full matrix or of one sector block."""
        if excitations not in self._eigen:
            if excitations is None:
                dense = self.matrix.toarray()
            else:
                idx = self.sector(excitations)
                dense = self.matrix[idx][:, idx].toarray()
            logger.debug(
                f"Diagonalizing block of size {dense.shape[0]} "
                f"(N={self.n_sites}, sector={excitations})"
            )
            self._eigen[excitations] = scipy.linalg.eigh(dense)
        return self._eigen[excitations]


# ============================================================================
# Construction
# ============================================================================

def _popcounts(n_sites: int) -> np.ndarray:
    idx = np.arange(2 ** n_sites)
    counts = np.zeros(idx.size, dtype=np.int64)
    for bit in range(n_sites):
        counts += (idx >> bit) & 1
    return counts


def _site_mask(n_sites: int, site: int) -> int:
    return 1 << (n_sites - site)


def _check_size(n_sites: int, max_sites: Optional[int]) -> None:
    limit = settings.ORACLE_MAX_SITES if max_sites is None else max_sites
    if n_sites > limit:
        raise ResourceLimitError(
            f"oracle limited to N <= {limit}, got N={n_sites}",
            field="n_sites",
            suggested_action="Compare gamma_direct and gamma_fast instead",
        )


def build_hamiltonian(spec: ChainSpec, max_sites: Optional[int] = None) -> SpinHamiltonian:
    """
    Sparse spin Hamiltonian of the chain.

    Raises:
        ResourceLimitError: If N exceeds the oracle size cap
    """
    _check_size(spec.n_sites, max_sites)
    n = spec.n_sites
    dim = 2 ** n
    idx = np.arange(dim)

    diagonal = -spec.field * (n - 2.0 * _popcounts(n))
    rows, cols, values = [idx], [idx], [diagonal]

    # flip-flop between neighbours l, l+1: <..10..|H|..01..> = J
    for site in range(1, n):
        left, right = _site_mask(n, site), _site_mask(n, site + 1)
        differ = ((idx & left) > 0) != ((idx & right) > 0)
        source = idx[differ]
        rows.append(source ^ left ^ right)
        cols.append(source)
        values.append(np.full(source.size, spec.coupling))

    matrix = scipy.sparse.coo_matrix(
        (np.concatenate(values).astype(complex), (np.concatenate(rows), np.concatenate(cols))),
        shape=(dim, dim),
    ).tocsr()
    logger.debug(f"Built spin Hamiltonian N={n}, nnz={matrix.nnz}")
    return SpinHamiltonian(spec=spec, matrix=matrix)


def spectrum_offset(spec: ChainSpec) -> float:
    """Constant separating the spin Hamiltonian from sum_m E_m n_m."""
    return -spec.field * spec.n_sites


def basis_state(n_sites: int, pattern: ExcitationPattern) -> FullState:
    """Computational basis state with the pattern's sites excited."""
    if not pattern.fits(n_sites):
        raise InvalidArgumentError(
            f"pattern {pattern.describe()} does not fit N={n_sites}",
            field="pattern",
        )
    amplitudes = np.zeros(2 ** n_sites, dtype=complex)
    amplitudes[sum(_site_mask(n_sites, s) for s in pattern.sites)] = 1.0
    return FullState(amplitudes)


# ============================================================================
# Evolution
# ============================================================================

def _propagate(vectors: np.ndarray, energies: np.ndarray, psi: np.ndarray, t: float) -> np.ndarray:
    coefficients = vectors.conj().T @ psi
    return vectors @ (np.exp(-1j * energies * t) * coefficients)


def evolve_full(
    hamiltonian: SpinHamiltonian,
    state: FullState,
    t: float,
    method: EvolutionMethod = "auto",
) -> FullState:
    """
    exp(-iHt) applied to a state.

    "full" diagonalizes the whole matrix, "blocks" each excitation sector the
    state touches; "auto" switches at ORACLE_BLOCK_THRESHOLD.

    Raises:
        InvalidArgumentError: If the state dimension does not match
    """
    psi = np.asarray(state.amplitudes, dtype=complex)
    if psi.shape != (hamiltonian.dimension,):
        raise InvalidArgumentError(
            f"state of length {psi.size} for a space of dimension {hamiltonian.dimension}",
            field="state",
        )
    if method == "auto":
        method = "full" if hamiltonian.dimension <= settings.ORACLE_BLOCK_THRESHOLD else "blocks"

    if method == "full":
        energies, vectors = hamiltonian.eigensystem()
        return FullState(_propagate(vectors, energies, psi, t))

    result = np.zeros_like(psi)
    numbers = hamiltonian.excitation_numbers()
    for m in np.unique(numbers[np.abs(psi) > 0]):
        idx = hamiltonian.sector(int(m))
        energies, vectors = hamiltonian.eigensystem(int(m))
        result[idx] = _propagate(vectors, energies, psi[idx], t)
    return FullState(result)


# ============================================================================
# Observables
# ============================================================================

def site_occupations(state: FullState) -> np.ndarray:
    """<n_l> for l = 1..N."""
    n = state.n_sites
    probabilities = np.abs(state.amplitudes) ** 2
    idx = np.arange(probabilities.size)
    return np.array([probabilities[(idx & _site_mask(n, s)) > 0].sum() for s in range(1, n + 1)])


def _split_last_site(amplitudes: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """(down, up) amplitudes of site N, aligned on the remaining sites."""
    return amplitudes[0::2], amplitudes[1::2]


def reduced_density_site_n(state: FullState) -> np.ndarray:
    """
    Reduced density matrix of the last site in (up, down) ordering:

        [[<s+ s->, <s->], [<s+>, <s- s+>]]
    """
    down, up = _split_last_site(state.amplitudes)
    up_population = float(np.sum(np.abs(up) ** 2))
    down_population = float(np.sum(np.abs(down) ** 2))
    raising = complex(np.vdot(up, down))  # <psi| s+_N |psi>
    return np.array(
        [[up_population, np.conj(raising)], [raising, down_population]],
        dtype=complex,
    )


def branch_states(
    spec: ChainSpec,
    pair: BranchPair,
    t: float,
    hamiltonian: Optional[SpinHamiltonian] = None,
) -> Tuple[FullState, FullState]:
    """Evolved channel-only branch and sender-excited branch."""
    hamiltonian = hamiltonian or build_hamiltonian(spec)
    psi0 = evolve_full(hamiltonian, basis_state(spec.n_sites, pair.branch0), t)
    psi1 = evolve_full(hamiltonian, basis_state(spec.n_sites, pair.branch1), t)
    return psi0, psi1


def gamma_oracle(
    spec: ChainSpec,
    pair: BranchPair,
    t: float,
    hamiltonian: Optional[SpinHamiltonian] = None,
) -> GammaSet:
    """
    Γ1..Γ5 from explicit spin-space states.

    Γ1, Γ2 are the site-N up populations of the two branches and Γ5 the cross
    term <Psi1| s+_N |Psi0>, so that <s+_N> = alpha beta* Γ5.

    Raises:
        ResourceLimitError: If N exceeds the oracle size cap
    """
    if pair.n_sites != spec.n_sites:
        raise InvalidArgumentError("channel and chain lengths differ", field="pair")
    psi0, psi1 = branch_states(spec, pair, t, hamiltonian)
    down0, up0 = _split_last_site(psi0.amplitudes)
    _, up1 = _split_last_site(psi1.amplitudes)
    gamma1 = float(np.sum(np.abs(up0) ** 2))
    gamma2 = float(np.sum(np.abs(up1) ** 2))
    gamma5 = complex(np.vdot(up1, down0))
    return GammaSet(gamma1, gamma2, 1.0 - gamma1, 1.0 - gamma2, gamma5)
