"""
Verification Harness
Cross-checks the direct, Cauchy-Binet and exact-diagonalization Γ evaluators.
"""

import logging
from typing import Iterable, List, Optional, Tuple

import numpy as np

from src.models.channels import custom_channel, fm_ground_channel, neel_channel
from src.models.errors import VerificationError
from src.models.schemas import (
    BranchPair,
    ChainSpec,
    VerificationCase,
    VerificationReport,
)
from src.services.fidelity import gamma_direct, gamma_fast
from src.services.oracle import SpinHamiltonian, build_hamiltonian, gamma_oracle

logger = logging.getLogger(__name__)


def random_channels(n_sites: int, count: int, rng: np.random.Generator) -> List[BranchPair]:
    """`count` random channel patterns over sites 2..N."""
    pairs = []
    for _ in range(count):
        m = int(rng.integers(0, n_sites))  # 0..N-1 channel excitations
        sites = rng.choice(np.arange(2, n_sites + 1), size=m, replace=False)
        pairs.append(custom_channel(n_sites, sites.tolist()))
    return pairs


def verify_equivalence(
    n_values: Iterable[int],
    draws: int = 20,
    tolerance: float = 1e-10,
    seed: int = 0,
    include_oracle: bool = True,
    custom_patterns: int = 3,
    jt_range: Tuple[float, float] = (0.0, 50.0),
    h_range: Tuple[float, float] = (0.0, 2.0),
    coupling: float = 1.0,
) -> VerificationReport:
    """
    Compare evaluators on random (Jt, h) draws for FM-ground, Néel and random channels.

    Raises:
        ResourceLimitError: If the oracle is requested beyond its size cap, or
            direct enumeration beyond the enumeration cap
    """
    rng = np.random.default_rng(seed)
    report = VerificationReport(tolerance=tolerance)

    for n in n_values:
        pairs = [fm_ground_channel(n), neel_channel(n)] + random_channels(n, custom_patterns, rng)
        for _ in range(draws):
            jt = float(rng.uniform(*jt_range))
            field = float(rng.uniform(*h_range))
            spec = ChainSpec(n_sites=n, coupling=coupling, field=field)
            t = jt / abs(coupling)
            hamiltonian: Optional[SpinHamiltonian] = build_hamiltonian(spec) if include_oracle else None

            for pair in pairs:
                direct = gamma_direct(spec, pair, t)
                fast = gamma_fast(spec, pair, t)
                case = VerificationCase(
                    n_sites=n,
                    channel=pair.label,
                    jt=jt,
                    field=field,
                    fast_vs_direct=fast.max_deviation(direct),
                )
                if hamiltonian is not None:
                    oracle = gamma_oracle(spec, pair, t, hamiltonian)
                    case.direct_vs_oracle = direct.max_deviation(oracle)
                report.cases.append(case)

        logger.info(f"Verified N={n}: worst deviation so far {report.worst:.3e}")

    return report


def require_passed(report: VerificationReport) -> VerificationReport:
    """
    Return the report unchanged if every case is within tolerance.

    Raises:
        VerificationError: naming the worst case otherwise
    """
    if report.passed:
        return report
    worst = max(
        report.cases,
        key=lambda c: max(c.fast_vs_direct, c.direct_vs_oracle or 0.0),
    )
    raise VerificationError(
        f"deviation {report.worst:.3e} exceeds tolerance {report.tolerance:.1e} "
        f"(N={worst.n_sites}, channel={worst.channel}, Jt={worst.jt:.6g}, h={worst.field:.6g})",
        field="tolerance",
    )
