"""
Channel Constructors
Build the sender/channel branch pairs for the Néel, FM-ground and custom preparations.
"""

from typing import Iterable

from pydantic import ValidationError as PydanticValidationError

from src.models.errors import InvalidArgumentError
from src.models.schemas import BranchPair, ChannelKind, ExcitationPattern


def _require_chain(n_sites: int) -> None:
    if n_sites < 2:
        raise InvalidArgumentError(
            f"a channel needs at least 2 sites, got {n_sites}",
            field="n_sites",
            suggested_action="Use n_sites >= 2",
        )


def _pair(n_sites: int, channel_sites: Iterable[int], kind: ChannelKind) -> BranchPair:
    sites = tuple(sorted(channel_sites))
    try:
        return BranchPair(
            n_sites=n_sites,
            branch0=ExcitationPattern(sites=sites),
            branch1=ExcitationPattern(sites=(1,) + sites),
            kind=kind,
        )
    except PydanticValidationError as exc:
        raise InvalidArgumentError(str(exc), field="channel_sites") from exc


def neel_channel(n_sites: int) -> BranchPair:
    """
    Néel channel over sites 2..N, starting up at site 2.

    Odd N reads 1010...10 (site N down), even N reads 1010...01 (site N up),
    so M1 = (N-1)/2 for odd N and N/2 for even N.
    """
    _require_chain(n_sites)
    return _pair(n_sites, range(2, n_sites + 1, 2), ChannelKind.NEEL)


def fm_ground_channel(n_sites: int) -> BranchPair:
    """Fully polarized channel: no excitations besides the sender's."""
    _require_chain(n_sites)
    return _pair(n_sites, (), ChannelKind.FM_GROUND)


def custom_channel(n_sites: int, channel_sites: Iterable[int]) -> BranchPair:
    """Arbitrary channel excitations; input order does not matter."""
    _require_chain(n_sites)
    sites = list(channel_sites)
    if len(set(sites)) != len(sites):
        raise InvalidArgumentError(
            f"duplicate channel site in {sites}",
            field="channel_sites",
            suggested_action="List each site once",
        )
    bad = [s for s in sites if not 2 <= s <= n_sites]
    if bad:
        raise InvalidArgumentError(
            f"channel sites {bad} outside [2, {n_sites}]",
            field="channel_sites",
            suggested_action="Site 1 is the sender; channel sites run from 2 to N",
        )
    return _pair(n_sites, sites, ChannelKind.CUSTOM)


def parse_channel(descriptor: str, n_sites: int) -> BranchPair:
    """
    Parse a channel literal: "neel", "fm" or comma-separated sites such as "2,4,6".

    Raises:
        InvalidArgumentError: unknown keyword, malformed list or sites outside [2, N]
    """
    text = descriptor.strip().lower()
    if text == ChannelKind.NEEL.value:
        return neel_channel(n_sites)
    if text in (ChannelKind.FM_GROUND.value, "fm_ground"):
        return fm_ground_channel(n_sites)
    if text in ("", "-", "none"):
        return custom_channel(n_sites, ())
    try:
        sites = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise InvalidArgumentError(
            f"cannot parse channel '{descriptor}'",
            field="channel",
            suggested_action="Use 'neel', 'fm' or a list like 2,4,6",
        ) from exc
    return custom_channel(n_sites, sites)
