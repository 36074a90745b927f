"""Message formats and per-node logic for RLAR/DLAR and their secure modes.

Route discovery floods a request; a receiver relays it only when the
protocol's geometric gate passes (inside the carried request zone, or no
farther from the destination than the sender was).  In secure modes every
hop pair authenticates first: the sender's commitment rides the request,
the receiver answers with its own key material, the sender opens the
commitment, and both compare XOR authentication strings out-of-band.  A
man-in-the-middle that substitutes any of that material is caught either by
the commitment check or by the string comparison.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Iterable, Optional, Union

from .crypto import (
    AuthString,
    Commitment,
    CommitmentMismatch,
    Concatenation,
    DhParams,
    OpenParam,
    PrivateKey,
    PublicKey,
    RandomString,
    SharedKey,
    auth_string,
    commit,
    gen_public,
    open_verify,
    shared_key,
)
from .geo import ExpectedZone, RequestZone, Vec2, contains, distance, expected_zone, request_zone
from .link import LinkTiming, OobChannel, oob_compare

NodeAddr = int


class Protocol(Enum):
    RLAR = "rlar"
    DLAR = "dlar"
    SECURE_RLAR = "secure_rlar"
    SECURE_DLAR = "secure_dlar"

    @property
    def secure(self) -> bool:
        return self in (Protocol.SECURE_RLAR, Protocol.SECURE_DLAR)

    @property
    def zone_based(self) -> bool:
        return self in (Protocol.RLAR, Protocol.SECURE_RLAR)


class NodeRole(Enum):
    HONEST = "honest"
    MALICIOUS_MITM = "malicious_mitm"


class NoDestinationInfo(Exception):
    """The source holds no location record for the requested destination."""


class BrokenReversePath(Exception):
    """The next hop on a reply's reverse path is out of range."""


# ---------------------------------------------------------------------------
# Messages


@dataclass(frozen=True, slots=True)
class RlarInfo:
    zone: RequestZone
    src_pos: Vec2
    src_in_zone: bool


@dataclass(frozen=True, slots=True)
class DlarInfo:
    dist: float
    dest_pos: Vec2

    def __post_init__(self) -> None:
        if self.dist < 0:
            raise ValueError("carried distance must be >= 0")


@dataclass(frozen=True, slots=True)
class RouteRequest:
    msg_id: int
    src: NodeAddr
    dst: NodeAddr
    variant: Union[RlarInfo, DlarInfo]
    hop_trace: tuple[NodeAddr, ...]
    commitment: Optional[Commitment] = None

    def __post_init__(self) -> None:
        if not self.hop_trace or self.hop_trace[0] != self.src:
            raise ValueError("hop trace must begin with the source")
        if len(set(self.hop_trace)) != len(self.hop_trace):
            raise ValueError("hop trace must not repeat nodes")

    @property
    def secure(self) -> bool:
        return self.commitment is not None


@dataclass(frozen=True, slots=True)
class RouteReply:
    msg_id: int
    dst_time: float
    dst_speed: float
    reverse_path: tuple[NodeAddr, ...]


# ---------------------------------------------------------------------------
# Per-node state

@dataclass(slots=True)
class DestInfo:
    """What a source knows about a destination: a position fix plus speed."""

    pos: Vec2
    pos_time: float
    speed: float
    last_reply_time: float | None = None


class DuplicateCache:
    """Seen message ids, optionally bounded with FIFO eviction."""

    def __init__(self, capacity: int | None = None):
        self.capacity = capacity
        self._seen: set = set()
        self._order: deque = deque()

    def seen(self, msg_id) -> bool:
        return msg_id in self._seen

    def add(self, msg_id) -> None:
        if msg_id in self._seen:
            return
        self._seen.add(msg_id)
        if self.capacity is not None:
            self._order.append(msg_id)
            if len(self._order) > self.capacity:
                self._seen.discard(self._order.popleft())

    def remove(self, msg_id) -> None:
        """Forget an entry: a tampered copy was never accepted."""
        self._seen.discard(msg_id)

    def __len__(self) -> int:
        return len(self._seen)


@dataclass(slots=True)
class RouterState:
    """The routing-visible slice of a node: identity, position, caches."""

    addr: NodeAddr
    pos: Vec2
    speed: float = 0.0
    role: NodeRole = NodeRole.HONEST
    seen: DuplicateCache = field(default_factory=DuplicateCache)
    dest_info: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Handshake material and state machine


@dataclass(frozen=True, slots=True)
class HandshakeMaterial:
    """One party's secrets for a single handshake."""

    private: PrivateKey
    public: PublicKey
    rand_string: RandomString
    nonce: bytes

    @property
    def concat(self) -> Concatenation:
        return Concatenation(self.public, self.rand_string)

    def commitment(self) -> Commitment:
        return commit(self.concat, self.nonce)

    def open_param(self) -> OpenParam:
        return OpenParam(self.concat, self.nonce)

    @classmethod
    def draw(cls, params: DhParams, k: int, rng: random.Random) -> "HandshakeMaterial":
        priv = PrivateKey(rng.randrange(1, params.modulus_m))
        return cls(
            private=priv,
            public=gen_public(params, priv),
            rand_string=RandomString.random(k, rng),
            nonce=rng.getrandbits(128).to_bytes(16, "big"),
        )


class HandshakeStage(Enum):
    SENT_COMMIT = "sent_commit"
    GOT_PEER_MSG = "got_peer_msg"
    SENT_OPEN = "sent_open"
    VERIFIED = "verified"
    DETECTED = "detected"


@dataclass(slots=True)
class HandshakeState:
    stage: HandshakeStage
    own_private: PrivateKey
    own_string: RandomString
    peer_concat: Concatenation | None = None
    shared: SharedKey | None = None

    def verify(self, key: SharedKey) -> None:
        self.shared = key
        self.stage = HandshakeStage.VERIFIED

    def detect(self) -> None:
        self.shared = None
        self.stage = HandshakeStage.DETECTED


# ---------------------------------------------------------------------------
# Attacker

@dataclass(frozen=True, slots=True)
class AttackerContext:
    """An active interposer's key material and which messages it replaces."""

    material: HandshakeMaterial
    substitute_peer_msg: bool = True
    substitute_open: bool = True

    def forged_concat(self, genuine: Concatenation) -> Concatenation:
        """The attacker's concatenation, always an actual substitution.

        A forgery whose random string happens to equal the genuine one would
        change nothing, so the first bit is flipped in that case.
        """
        s = self.material.rand_string
        if s.bits == genuine.random_string.bits:
            s = RandomString((s.bits[0] ^ 1,) + s.bits[1:])
        return Concatenation(self.material.public, s)


class AttackEffect(Enum):
    NO_EFFECT = "no_effect"
    DROP_DATA = "drop_data"
    SUBSTITUTE = "substitute"


# How far off the straight u-v segment an interposer may sit, as a detour
# ratio: it must hear both endpoints and its relayed path u->attacker->v can
# exceed the direct distance by at most this factor.
INTERPOSE_SLACK = 1.05


def can_interpose(attacker_pos: Vec2, u_pos: Vec2, v_pos: Vec2, tx_range: float) -> bool:
    """Whether a node is positioned to interpose on the u-v exchange.

    It must hear both endpoints and sit on the message path between them:
    inside the slim ellipse with u and v as foci.
    """
    d_uv = distance(u_pos, v_pos)
    d_au = distance(attacker_pos, u_pos)
    d_av = distance(attacker_pos, v_pos)
    return d_au <= tx_range and d_av <= tx_range and d_au + d_av <= INTERPOSE_SLACK * d_uv


def attacker_act(role: NodeRole, *, secure: bool, on_path: bool, interposing: bool) -> AttackEffect:
    """What a node of the given role does in the given traffic context.

    In secure modes an interposing attacker substitutes handshake material
    (which the handshake then detects); in plain modes an attacker on a data
    path silently drops the packets crossing it.
    """
    if role is not NodeRole.MALICIOUS_MITM:
        return AttackEffect.NO_EFFECT
    if secure:
        return AttackEffect.SUBSTITUTE if interposing else AttackEffect.NO_EFFECT
    return AttackEffect.DROP_DATA if on_path else AttackEffect.NO_EFFECT


# ---------------------------------------------------------------------------
# Handler actions


@dataclass(frozen=True, slots=True)
class Discard:
    reason: str


@dataclass(frozen=True, slots=True)
class Forward:
    request: RouteRequest


@dataclass(frozen=True, slots=True)
class Reply:
    reply: RouteReply


@dataclass(frozen=True, slots=True)
class StartHandshake:
    peer: NodeAddr
    then: Union[Forward, Reply]


@dataclass(frozen=True, slots=True)
class ForwardReverse:
    next_hop: NodeAddr


@dataclass(frozen=True, slots=True)
class DeliverToSource:
    route: tuple[NodeAddr, ...]


# ---------------------------------------------------------------------------
# Protocol operations


def initiate_rreq(
    state: RouterState,
    dst: NodeAddr,
    protocol: Protocol,
    now: float,
    msg_id: int,
    material: HandshakeMaterial | None = None,
    retry_expansion: float = 0.0,
) -> RouteRequest:
    """Build the discovery request a source floods to its neighbors.

    The zone variant carries the request zone computed from the last known
    destination fix; the distance variant carries the source's current
    distance to that fix.  Secure modes attach the source's commitment.
    retry_expansion widens the search (the expected-zone radius, or the
    carried starting distance) beyond the estimate; sources pass their
    retry backoff here so a failed discovery epoch searches a larger area.
    With 0 the request carries exactly the estimate.
    """
    info = state.dest_info.get(dst)
    if info is None:
        raise NoDestinationInfo(f"node {state.addr} has no location record for {dst}")
    if protocol.zone_based:
        ez = expected_zone(info.pos, info.speed, info.pos_time, now)
        if retry_expansion > 0.0:
            ez = ExpectedZone(ez.center, ez.radius + retry_expansion)
        variant: Union[RlarInfo, DlarInfo] = RlarInfo(
            zone=request_zone(state.pos, ez),
            src_pos=state.pos,
            src_in_zone=distance(state.pos, ez.center) <= ez.radius,
        )
    else:
        variant = DlarInfo(
            dist=distance(state.pos, info.pos) + retry_expansion, dest_pos=info.pos
        )
    commitment = None
    if protocol.secure:
        if material is None:
            raise ValueError("secure modes need handshake material")
        commitment = material.commitment()
    req = RouteRequest(
        msg_id=msg_id,
        src=state.addr,
        dst=dst,
        variant=variant,
        hop_trace=(state.addr,),
        commitment=commitment,
    )
    state.seen.add(msg_id)
    return req


def handle_rreq(
    state: RouterState,
    req: RouteRequest,
    now: float,
    material: HandshakeMaterial | None = None,
) -> Union[Discard, Forward, Reply, StartHandshake]:
    """Decide what a node does with an arriving route request.

    Duplicates are dropped first, then the protocol gate runs; an eligible
    non-destination relays (distance variant rewrites the carried distance
    to its own), the destination answers with a reply whose reverse path is
    the accepted hop trace.  In secure mode the resulting action is wrapped
    in a handshake with the previous hop.
    """
    if state.seen.seen(req.msg_id):
        return Discard("duplicate")
    state.seen.add(req.msg_id)

    if isinstance(req.variant, RlarInfo):
        if not contains(req.variant.zone, state.pos):
            return Discard("out-of-zone")
        forwarded_variant: Union[RlarInfo, DlarInfo] = req.variant
    else:
        own_dist = distance(state.pos, req.variant.dest_pos)
        if own_dist > req.variant.dist:
            return Discard("farther")
        forwarded_variant = DlarInfo(dist=own_dist, dest_pos=req.variant.dest_pos)

    if state.addr == req.dst:
        trace = req.hop_trace + (state.addr,)
        action: Union[Forward, Reply] = Reply(
            RouteReply(
                msg_id=req.msg_id,
                dst_time=now,
                dst_speed=state.speed,
                reverse_path=tuple(reversed(trace)),
            )
        )
    else:
        commitment = req.commitment
        if req.secure:
            if material is None:
                raise ValueError("secure modes need handshake material to forward")
            commitment = material.commitment()
        action = Forward(
            replace(
                req,
                variant=forwarded_variant,
                hop_trace=req.hop_trace + (state.addr,),
                commitment=commitment,
            )
        )
    if req.secure:
        return StartHandshake(peer=req.hop_trace[-1], then=action)
    return action


@dataclass(frozen=True, slots=True)
class Established:
    initiator_key: SharedKey
    responder_key: SharedKey
    delay: float
    initiator_state: HandshakeState
    responder_state: HandshakeState


@dataclass(frozen=True, slots=True)
class MitmDetected:
    delay: float
    reason: str
    initiator_state: HandshakeState
    responder_state: HandshakeState


def run_handshake(
    params: DhParams,
    initiator: HandshakeMaterial,
    responder: HandshakeMaterial,
    timing: LinkTiming,
    channel: OobChannel,
    attacker: AttackerContext | None = None,
) -> Union[Established, MitmDetected]:
    """Drive one pairwise authentication to its outcome.

    The initiator's commitment already traveled with the route request; the
    exchange adds the responder's concatenation, the open parameter, and the
    out-of-band string comparison.  An attacker may substitute either
    in-band message; the out-of-band comparison itself cannot be touched.
    """
    init_hs = HandshakeState(HandshakeStage.SENT_COMMIT, initiator.private, initiator.rand_string)
    resp_hs = HandshakeState(HandshakeStage.SENT_COMMIT, responder.private, responder.rand_string)
    commitment = initiator.commitment()
    delay = 2 * timing.per_hop_tx_delay + timing.oob_delay

    # Responder -> initiator: its public key and random string.
    peer_msg = responder.concat
    if attacker is not None and attacker.substitute_peer_msg:
        peer_msg = attacker.forged_concat(peer_msg)
    init_hs.peer_concat = peer_msg
    init_hs.stage = HandshakeStage.GOT_PEER_MSG
    s_initiator = auth_string(initiator.rand_string, peer_msg.random_string)

    # Initiator -> responder: the opening of its commitment.
    open_param = initiator.open_param()
    if attacker is not None and attacker.substitute_open:
        open_param = attacker.material.open_param()
    init_hs.stage = HandshakeStage.SENT_OPEN
    resp_hs.stage = HandshakeStage.GOT_PEER_MSG
    try:
        opened = open_verify(commitment, open_param)
    except CommitmentMismatch:
        init_hs.detect()
        resp_hs.detect()
        return MitmDetected(delay, "commitment-mismatch", init_hs, resp_hs)
    resp_hs.peer_concat = opened
    s_responder = auth_string(opened.random_string, responder.rand_string)

    match, _ = oob_compare(channel, s_initiator, s_responder, timing)
    if not match:
        init_hs.detect()
        resp_hs.detect()
        return MitmDetected(delay, "auth-string-mismatch", init_hs, resp_hs)

    init_hs.verify(shared_key(params, peer_msg.public_key, initiator.private))
    resp_hs.verify(shared_key(params, opened.public_key, responder.private))
    return Established(init_hs.shared, resp_hs.shared, delay, init_hs, resp_hs)


def select_alternate_neighbor(
    neighbors: Iterable[tuple[NodeAddr, Vec2]],
    dest_pos: Vec2,
    excluded: set[NodeAddr],
) -> NodeAddr | None:
    """Closest-to-destination eligible neighbor outside the excluded set.

    Ties break toward the smaller address so reruns pick the same node.
    """
    best: NodeAddr | None = None
    best_key: tuple[float, NodeAddr] | None = None
    for addr, pos in neighbors:
        if addr in excluded:
            continue
        key = (distance(pos, dest_pos), addr)
        if best_key is None or key < best_key:
            best, best_key = addr, key
    return best


def handle_rrep(
    state: RouterState,
    rep: RouteReply,
    reachable: Callable[[NodeAddr], bool] | None = None,
) -> Union[ForwardReverse, DeliverToSource]:
    """Walk a reply one step back toward the source.

    At the source the route (the accepted hop trace) is installed and the
    destination's reported time and speed are recorded for future zone
    computation.  Raises BrokenReversePath when the next hop moved away.
    """
    path = rep.reverse_path
    idx = path.index(state.addr)
    if idx == len(path) - 1:
        route = tuple(reversed(path))
        info = state.dest_info.get(route[-1])
        if info is not None:
            info.speed = rep.dst_speed
            info.last_reply_time = rep.dst_time
        return DeliverToSource(route)
    nxt = path[idx + 1]
    if reachable is not None and not reachable(nxt):
        raise BrokenReversePath(f"next reverse hop {nxt} is out of range")
    return ForwardReverse(nxt)
