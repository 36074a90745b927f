"""Pairwise Wi-Fi Direct session setup and the trusted out-of-band channel.

Sessions are modeled as a timed state machine walking discovery, group-owner
negotiation, protected setup, and address configuration; no real frames are
exchanged.  The out-of-band channel only compares authentication strings and
is tamper-proof by construction: its inputs are the endpoints' own values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .crypto import AuthString


class WfdPhase(Enum):
    IDLE = 0
    DISCOVERY = 1
    GO_NEGOTIATION = 2
    WPS = 3
    ADDR_CONFIG = 4
    ESTABLISHED = 5


@dataclass(frozen=True, slots=True)
class LinkTiming:
    """Per-phase and per-message delays, in seconds."""

    discovery: float = 0.002
    go_negotiation: float = 0.002
    wps: float = 0.003
    addr_config: float = 0.003
    per_hop_tx_delay: float = 0.001
    oob_delay: float = 0.002

    def __post_init__(self) -> None:
        if min(
            self.discovery,
            self.go_negotiation,
            self.wps,
            self.addr_config,
            self.per_hop_tx_delay,
            self.oob_delay,
        ) < 0:
            raise ValueError("link timings must be >= 0")

    @property
    def session_setup(self) -> float:
        return self.discovery + self.go_negotiation + self.wps + self.addr_config


@dataclass(slots=True)
class WfdSession:
    endpoint_a: int
    endpoint_b: int
    phase: WfdPhase = WfdPhase.IDLE
    group_owner: int | None = None
    history: list[WfdPhase] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.history.append(self.phase)

    def advance(self) -> WfdPhase:
        """Step to the next phase in order; negotiation fixes the group owner."""
        if self.phase is WfdPhase.ESTABLISHED:
            raise ValueError("session already established")
        self.phase = WfdPhase(self.phase.value + 1)
        if self.phase is WfdPhase.GO_NEGOTIATION:
            self.group_owner = min(self.endpoint_a, self.endpoint_b)
        self.history.append(self.phase)
        return self.phase

    def reset(self) -> None:
        self.phase = WfdPhase.IDLE
        self.group_owner = None
        self.history.append(self.phase)


class OutOfRange(Exception):
    """Endpoints are farther apart than the transmission range."""


def establish(
    a: int,
    b: int,
    timing: LinkTiming,
    distance: float = 0.0,
    tx_range: float = math.inf,
) -> tuple[WfdSession, float]:
    """Run the four setup phases between two in-range nodes.

    Returns the established session and the summed phase delays.  The group
    owner is the smaller node id, a fixed tie-break that keeps runs
    reproducible.
    """
    if a == b:
        raise ValueError("a session needs two distinct endpoints")
    if distance > tx_range:
        raise OutOfRange(f"endpoints {distance:.1f} apart exceed range {tx_range:.1f}")
    session = WfdSession(endpoint_a=a, endpoint_b=b)
    while session.phase is not WfdPhase.ESTABLISHED:
        session.advance()
    return session, timing.session_setup


def oob_compare(
    ch: "OobChannel", s_a: AuthString, s_b: AuthString, timing: LinkTiming
) -> tuple[bool, float]:
    """Compare the two endpoints' authentication strings over the channel.

    The values compared are the true endpoint values; nothing in the
    simulator can interpose on this exchange.
    """
    return s_a.bits == s_b.bits, timing.oob_delay


@dataclass(frozen=True, slots=True)
class OobChannel:
    endpoint_a: int
    endpoint_b: int

    def compare(self, s_a: AuthString, s_b: AuthString, timing: LinkTiming) -> tuple[bool, float]:
        return oob_compare(self, s_a, s_b, timing)
