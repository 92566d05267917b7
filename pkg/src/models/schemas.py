"""
SpinXfer Data Schemas
Pydantic models and value types shared across the propagator, fidelity,
oracle and experiments layers.

Conventions:
- Sites are 1-indexed everywhere on the public surface.
- Units are dimensionless with hbar = 1; times are reported as Jt.
- The sign of the coupling encodes the chain type (J < 0 FM, J > 0 AFM).
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


# ============================================================================
# Enums
# ============================================================================

class FidelityMode(str, Enum):
    """How the coherence term enters the average fidelity."""
    STRICT = "strict"  # Re(Γ5): Bob must receive exactly Alice's state
    PHASE_OPTIMIZED = "phase_optimized"  # |Γ5|: a fixed relative phase is allowed


class ChannelKind(str, Enum):
    """How the channel spins 2..N were prepared."""
    NEEL = "neel"
    FM_GROUND = "fm"
    CUSTOM = "custom"


# ============================================================================
# Chain and Excitation Models
# ============================================================================

class ChainSpec(BaseModel):
    """Uniform open XY chain of N spins with coupling J and field h."""
    model_config = ConfigDict(frozen=True)

    n_sites: int = Field(..., ge=1, description="Chain length N")
    coupling: float = Field(1.0, description="Exchange constant J (J > 0 AFM, J < 0 FM)")
    field: float = Field(0.0, description="Uniform field h along z")

    @field_validator("coupling")
    @classmethod
    def _coupling_nonzero(cls, value: float) -> float:
        if not math.isfinite(value) or value == 0.0:
            raise ValueError("coupling must be finite and nonzero")
        return value

    @field_validator("field")
    @classmethod
    def _field_finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("field must be finite")
        return value

    @property
    def is_ferromagnetic(self) -> bool:
        return self.coupling < 0

    @property
    def scaled_field(self) -> float:
        """The ratio 2h/J used on figure axes."""
        return 2.0 * self.field / self.coupling

    def with_field(self, field: float) -> "ChainSpec":
        return self.model_copy(update={"field": float(field)})


class ExcitationPattern(BaseModel):
    """Strictly increasing set of initially excited (up) sites."""
    model_config = ConfigDict(frozen=True)

    sites: Tuple[int, ...] = Field(default_factory=tuple)

    @field_validator("sites")
    @classmethod
    def _strictly_increasing(cls, value: Tuple[int, ...]) -> Tuple[int, ...]:
        if any(s < 1 for s in value):
            raise ValueError("sites are 1-indexed and must be >= 1")
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError("sites must be distinct and sorted ascending")
        return value

    @property
    def count(self) -> int:
        """Number of excitations M."""
        return len(self.sites)

    def fits(self, n_sites: int) -> bool:
        return all(s <= n_sites for s in self.sites)

    def indices(self) -> np.ndarray:
        """0-based row indices for array access."""
        return np.asarray(self.sites, dtype=np.intp) - 1

    def describe(self) -> str:
        return ",".join(str(s) for s in self.sites) if self.sites else "-"


class BranchPair(BaseModel):
    """
    The two branches of the encoded initial state.

    branch0 is the channel alone (Alice's spin down, M1 excitations);
    branch1 adds Alice's excitation at site 1 (M2 = M1 + 1).
    """
    model_config = ConfigDict(frozen=True)

    n_sites: int = Field(..., ge=2)
    branch0: ExcitationPattern
    branch1: ExcitationPattern
    kind: ChannelKind = ChannelKind.CUSTOM

    @model_validator(mode="after")
    def _branches_consistent(self) -> "BranchPair":
        if 1 in self.branch0.sites:
            raise ValueError("site 1 belongs to the sender and cannot be in the channel")
        if self.branch1.sites != (1,) + self.branch0.sites:
            raise ValueError("branch1 must equal branch0 with site 1 added")
        if not self.branch1.fits(self.n_sites):
            raise ValueError(f"channel sites must lie in [2, {self.n_sites}]")
        return self

    @property
    def m1(self) -> int:
        return self.branch0.count

    @property
    def m2(self) -> int:
        return self.branch1.count

    @property
    def label(self) -> str:
        if self.kind is ChannelKind.CUSTOM:
            return self.branch0.describe()
        return self.kind.value


# ============================================================================
# Numeric Value Types
# ============================================================================

@dataclass(frozen=True)
class SpectralData:
    """Single-particle momenta q_m = pi m/(N+1) and energies E_m = 2h + 2J cos q_m."""
    momenta: np.ndarray
    energies: np.ndarray


@dataclass(frozen=True)
class AmplitudeMatrix:
    """Transition amplitudes f_{k,l}(t); entries[k-1, l-1] = f_{k,l}."""
    time: float
    entries: np.ndarray

    def amplitude(self, k: int, l: int) -> complex:
        return complex(self.entries[k - 1, l - 1])


@dataclass(frozen=True)
class GammaSet:
    """The five site-N overlaps and the phase of the coherence term."""
    gamma1: float
    gamma2: float
    gamma3: float
    gamma4: float
    gamma5: complex

    @property
    def phase_gamma(self) -> float:
        return float(np.angle(self.gamma5))

    def as_tuple(self) -> Tuple[float, float, float, float, complex]:
        return (self.gamma1, self.gamma2, self.gamma3, self.gamma4, self.gamma5)

    def shifted(self, delta_field: float, time: float) -> "GammaSet":
        """Γ at field h + delta_field from Γ at field h; only Γ5 picks up a phase."""
        return GammaSet(
            self.gamma1,
            self.gamma2,
            self.gamma3,
            self.gamma4,
            complex(self.gamma5 * np.exp(2j * delta_field * time)),
        )

    def max_deviation(self, other: "GammaSet") -> float:
        return max(abs(a - b) for a, b in zip(self.as_tuple(), other.as_tuple()))


# ============================================================================
# Experiment Models
# ============================================================================

class Grid1D(BaseModel):
    """Evenly spaced inclusive grid given by a step or a point count."""
    model_config = ConfigDict(frozen=True)

    start: float
    stop: float
    step: Optional[float] = Field(None, gt=0.0)
    count: Optional[int] = Field(None, ge=2)

    @model_validator(mode="after")
    def _check(self) -> "Grid1D":
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ValueError("grid bounds must be finite")
        if self.start > self.stop:
            raise ValueError("grid start must not exceed stop")
        if self.step is None and self.count is None and self.start != self.stop:
            raise ValueError("grid needs a step or a count")
        return self

    @classmethod
    def single(cls, value: float) -> "Grid1D":
        return cls(start=value, stop=value, step=1.0)

    @property
    def size(self) -> int:
        if self.start == self.stop:
            return 1
        if self.count is not None:
            return self.count
        # a step wider than the span still keeps both endpoints
        return max(int(round((self.stop - self.start) / self.step)) + 1, 2)

    @property
    def spacing(self) -> float:
        n = self.size
        return 0.0 if n == 1 else (self.stop - self.start) / (n - 1)

    def points(self) -> np.ndarray:
        n = self.size
        if n == 1:
            return np.array([self.start])
        return np.linspace(self.start, self.stop, n)


class OptimumResult(BaseModel):
    """Maximum average fidelity in a window and where it is reached."""
    model_config = ConfigDict(frozen=True)

    f_max: float
    t_max: float = Field(..., description="Arrival time, reported as Jt")
    h_star: float = Field(..., description="Field at the optimum")
    mode: FidelityMode
    refinement_tol: float
    coarse_max: float = Field(..., description="Best value on the coarse grid")


@dataclass(frozen=True)
class SweepResult:
    """Average fidelity over a (time, field) grid; values[i, j] at times[i], fields[j]."""
    times: np.ndarray
    fields: np.ndarray
    values: np.ndarray
    channel: str
    mode: FidelityMode

    def argmax(self) -> Tuple[float, float, float]:
        """(F, Jt, h) of the largest cell, earliest time then smallest field on ties."""
        flat = int(np.argmax(self.values))
        i, j = np.unravel_index(flat, self.values.shape)
        return float(self.values[i, j]), float(self.times[i]), float(self.fields[j])


class ChannelComparisonRow(BaseModel):
    """One (N, channel) row of the length-dependence study."""
    n_sites: int
    channel: str
    f_max: float
    t_max: float
    h_star: float
    mode: FidelityMode


class OrderingRow(BaseModel):
    """Average fidelity of one channel ordering at the reference arrival time."""
    pattern: str
    excitations: int
    t_eval: float
    fidelity: float
    delta: float = Field(..., description="F(pattern) - F(reference)")


class FieldPolicy(BaseModel):
    """Either a fixed field or a scan over a field grid."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["fixed", "optimal"] = "fixed"
    field: float = 0.0
    grid: Optional[Grid1D] = None

    @classmethod
    def fixed(cls, field: float) -> "FieldPolicy":
        return cls(kind="fixed", field=field)

    @classmethod
    def optimize(cls, grid: Grid1D) -> "FieldPolicy":
        return cls(kind="optimal", grid=grid)

    def describe(self) -> str:
        return f"fixed:{self.field:g}" if self.kind == "fixed" else "optimal"


# ============================================================================
# Verification Models
# ============================================================================

class VerificationCase(BaseModel):
    """Deviation between evaluators for one (N, channel, t, h) draw."""
    n_sites: int
    channel: str
    jt: float
    field: float
    fast_vs_direct: float
    direct_vs_oracle: Optional[float] = None


class VerificationReport(BaseModel):
    """Outcome of an evaluator cross-check over a grid of draws."""
    tolerance: float
    cases: List[VerificationCase] = Field(default_factory=list)

    @property
    def worst(self) -> float:
        values = [c.fast_vs_direct for c in self.cases]
        values += [c.direct_vs_oracle for c in self.cases if c.direct_vs_oracle is not None]
        return max(values, default=0.0)

    @property
    def passed(self) -> bool:
        return self.worst <= self.tolerance
