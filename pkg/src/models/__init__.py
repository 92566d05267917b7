"""
SpinXfer Data Models
Value types, channel constructors and exceptions shared by every layer.
"""

from .errors import (
    InvalidArgumentError,
    ResourceLimitError,
    SpinTransferError,
    VerificationError,
)
from .schemas import (
    AmplitudeMatrix,
    BranchPair,
    ChainSpec,
    ChannelKind,
    ExcitationPattern,
    FidelityMode,
    FieldPolicy,
    GammaSet,
    Grid1D,
    OptimumResult,
    SpectralData,
    SweepResult,
)
from .channels import (
    custom_channel,
    fm_ground_channel,
    neel_channel,
    parse_channel,
)

__all__ = [
    "AmplitudeMatrix",
    "BranchPair",
    "ChainSpec",
    "ChannelKind",
    "ExcitationPattern",
    "FidelityMode",
    "FieldPolicy",
    "GammaSet",
    "Grid1D",
    "OptimumResult",
    "SpectralData",
    "SweepResult",
    "InvalidArgumentError",
    "ResourceLimitError",
    "SpinTransferError",
    "VerificationError",
    "custom_channel",
    "fm_ground_channel",
    "neel_channel",
    "parse_channel",
]
