"""Seeded discrete-event simulation of route discovery and data delivery.

One scenario is one single-threaded event loop: Poisson traffic per flow,
flooded route discovery with per-hop security associations in secure modes,
hop-by-hop data forwarding along installed routes, bounce-back mobility on
a fixed tick, and per-flow metrics.  Everything is driven by independent
seed-derived random streams, so a (scenario, seed) pair fully determines
the report.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field
from typing import Optional, Union

from . import mobility as mob
from .crypto import DEFAULT_K, DEFAULT_PRIMES, DhParams, PrivateKey, gen_public
from .geo import Vec2, distance
from .link import LinkTiming, OobChannel, establish
from .routing import (
    AttackerContext,
    BrokenReversePath,
    DestInfo,
    Discard,
    DlarInfo,
    Forward,
    ForwardReverse,
    HandshakeMaterial,
    MitmDetected,
    NodeAddr,
    NodeRole,
    Protocol,
    RandomString,
    Reply,
    RouteReply,
    RouteRequest,
    RouterState,
    StartHandshake,
    can_interpose,
    handle_rrep,
    handle_rreq,
    initiate_rreq,
    run_handshake,
)


class ConfigError(Exception):
    """A scenario violates one of its invariants."""


# Chance that a plain-mode packet overheard by a stalking attacker is
# grabbed, and how close to a flow endpoint the attacker must lurk.
CAPTURE_DROP_RATE = 0.7
PREY_RADIUS = 150.0


@dataclass(frozen=True)
class Scenario:
    """Everything that determines one simulation run."""

    node_count: int
    protocol: Protocol = Protocol.DLAR
    seed: int = 0
    sim_duration: float = 10.0
    send_rate: float = 50.0
    packets_per_flow: Optional[int] = None
    node_speed: Union[float, tuple[float, float]] = 5.0
    malicious_count: int = 0
    tx_range: float = 200.0
    region_width: float = 1000.0
    region_height: float = 1000.0
    timing: LinkTiming = LinkTiming()
    prime_list: tuple = DEFAULT_PRIMES
    k: int = DEFAULT_K
    mean_leg: float = 25.0
    mobility_tick: float = 0.01
    route_timeout: float = 0.1
    discovery_retry: float = 0.5
    reply_mode: str = "reverse_path"
    trace: bool = False

    def validate(self) -> None:
        if self.node_count < 2 or self.node_count % 2:
            raise ConfigError("node_count must be even and >= 2 (flows pair i with i+N/2)")
        if not 0 <= self.malicious_count < self.node_count:
            raise ConfigError("malicious_count must lie in [0, node_count)")
        if self.send_rate <= 0:
            raise ConfigError("send_rate must be > 0")
        if self.sim_duration < 0:
            raise ConfigError("sim_duration must be >= 0")
        if self.tx_range <= 0:
            raise ConfigError("tx_range must be > 0")
        if self.reply_mode not in ("reverse_path", "flood"):
            raise ConfigError("reply_mode must be 'reverse_path' or 'flood'")
        if isinstance(self.node_speed, tuple):
            lo, hi = self.node_speed
            if not 0 < lo <= hi:
                raise ConfigError("speed range must satisfy 0 < lo <= hi")
        elif self.node_speed <= 0:
            raise ConfigError("node_speed must be > 0")

    def mobility_config(self) -> mob.MobilityConfig:
        if isinstance(self.node_speed, tuple):
            lo, hi = self.node_speed
        else:
            lo = hi = self.node_speed
        return mob.MobilityConfig(
            region_width=self.region_width,
            region_height=self.region_height,
            speed_min=lo,
            speed_max=hi,
            mean_leg=self.mean_leg,
        )


# ---------------------------------------------------------------------------
# Standalone operations


def gen_traffic(
    rate: float, duration: float, rng: random.Random, max_packets: Optional[int] = None
) -> list[float]:
    """Poisson send times for one flow: exponential gaps of mean 1/rate."""
    if rate <= 0:
        raise ValueError("rate must be > 0")
    times: list[float] = []
    t = rng.expovariate(rate)
    while t <= duration and (max_packets is None or len(times) < max_packets):
        times.append(t)
        t += rng.expovariate(rate)
    return times


def neighbor_discovery(positions: list[Vec2], tx_range: float) -> dict[int, list[int]]:
    """Adjacency lists: nodes within tx_range of each other (grid-bucketed).

    The relation is symmetric and irreflexive; neighbor lists come out
    sorted by index.
    """
    if tx_range <= 0:
        raise ValueError("tx_range must be > 0")
    cell = tx_range
    buckets: dict[tuple[int, int], list[int]] = {}
    for i, p in enumerate(positions):
        buckets.setdefault((int(p.x // cell), int(p.y // cell)), []).append(i)
    adj: dict[int, list[int]] = {i: [] for i in range(len(positions))}
    for (cx, cy), members in buckets.items():
        for i in members:
            pi = positions[i]
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    for j in buckets.get((cx + dx, cy + dy), ()):
                        if j > i and distance(pi, positions[j]) <= tx_range:
                            adj[i].append(j)
                            adj[j].append(i)
    for lst in adj.values():
        lst.sort()
    return adj


# ---------------------------------------------------------------------------
# Metrics


@dataclass(slots=True)
class EventLog:
    """Raw per-flow records out of a run; the input to compute_metrics."""

    flows: list[tuple[int, int]] = field(default_factory=list)
    sends: list[tuple[int, float]] = field(default_factory=list)
    deliveries: list[tuple[int, float, float]] = field(default_factory=list)
    mitm_detections: list[tuple[int, float]] = field(default_factory=list)
    rediscoveries: list[tuple[int, float]] = field(default_factory=list)


@dataclass(frozen=True, slots=True)
class FlowMetrics:
    src: NodeAddr
    dst: NodeAddr
    packets_sent: int
    packets_delivered: int
    delivery_pct: float
    avg_total_delay: Optional[float]
    mitm_detections: int
    route_rediscoveries: int


@dataclass(frozen=True, slots=True)
class MetricsReport:
    flows: tuple[FlowMetrics, ...]
    packets_sent: int
    packets_delivered: int
    delivery_pct: float
    avg_total_delay: Optional[float]
    mitm_detections: int
    route_rediscoveries: int

    def to_dict(self) -> dict:
        return {
            "packets_sent": self.packets_sent,
            "packets_delivered": self.packets_delivered,
            "delivery_pct": self.delivery_pct,
            "avg_total_delay": self.avg_total_delay,
            "mitm_detections": self.mitm_detections,
            "route_rediscoveries": self.route_rediscoveries,
            "flows": [
                {
                    "src": f.src,
                    "dst": f.dst,
                    "packets_sent": f.packets_sent,
                    "packets_delivered": f.packets_delivered,
                    "delivery_pct": f.delivery_pct,
                    "avg_total_delay": f.avg_total_delay,
                    "mitm_detections": f.mitm_detections,
                    "route_rediscoveries": f.route_rediscoveries,
                }
                for f in self.flows
            ],
        }


def compute_metrics(log: EventLog) -> MetricsReport:
    """Aggregate an event log into per-flow and overall delivery and delay."""
    n = len(log.flows)
    sent = [0] * n
    delivered = [0] * n
    delay_sum = [0.0] * n
    mitm = [0] * n
    redisc = [0] * n
    for i, _t in log.sends:
        sent[i] += 1
    for i, t_send, t_arrive in log.deliveries:
        delivered[i] += 1
        delay_sum[i] += t_arrive - t_send
    for i, _t in log.mitm_detections:
        mitm[i] += 1
    for i, _t in log.rediscoveries:
        redisc[i] += 1
    flows = tuple(
        FlowMetrics(
            src=src,
            dst=dst,
            packets_sent=sent[i],
            packets_delivered=delivered[i],
            delivery_pct=100.0 * delivered[i] / sent[i] if sent[i] else 0.0,
            avg_total_delay=delay_sum[i] / delivered[i] if delivered[i] else None,
            mitm_detections=mitm[i],
            route_rediscoveries=redisc[i],
        )
        for i, (src, dst) in enumerate(log.flows)
    )
    total_sent = sum(sent)
    total_delivered = sum(delivered)
    total_delay = sum(delay_sum)
    return MetricsReport(
        flows=flows,
        packets_sent=total_sent,
        packets_delivered=total_delivered,
        delivery_pct=100.0 * total_delivered / total_sent if total_sent else 0.0,
        avg_total_delay=total_delay / total_delivered if total_delivered else None,
        mitm_detections=sum(mitm),
        route_rediscoveries=sum(redisc),
    )


# ---------------------------------------------------------------------------
# The event loop

_TICK, _SEND, _RREQ, _APPLY, _RREP, _TIMEOUT, _RETRY, _INSTALL = range(8)


@dataclass(slots=True)
class _Flow:
    index: int
    src: NodeAddr
    dst: NodeAddr
    route: Optional[tuple[NodeAddr, ...]] = None
    route_version: int = 0
    discovering: bool = False
    current_msg: Optional[int] = None
    discovery_count: int = 0
    failed_attempts: int = 0
    timeout_pending: bool = False
    queue: list[float] = field(default_factory=list)


class Simulation:
    """One scenario wired up and ready to run."""

    def __init__(self, scenario: Scenario):
        scenario.validate()
        self.sc = scenario
        self.mob_config = scenario.mobility_config()
        self.timing = scenario.timing

        seed = scenario.seed
        self.rng_mobility = random.Random(f"{seed}:mobility")
        self.rng_traffic = random.Random(f"{seed}:traffic")
        self.rng_crypto = random.Random(f"{seed}:crypto")
        self.rng_roles = random.Random(f"{seed}:roles")
        self.rng_attack = random.Random(f"{seed}:attack")

        n = scenario.node_count
        self.kin = [mob.sample_initial(self.mob_config, self.rng_mobility) for _ in range(n)]
        # A single per-seed permutation makes malicious sets nest as the
        # count grows, which keeps sweeps comparable point to point.
        perm = self.rng_roles.sample(range(n), n)
        self.malicious = sorted(perm[: scenario.malicious_count])
        malicious_set = set(self.malicious)
        self.nodes = [
            RouterState(
                addr=i,
                pos=Vec2(k.x, k.y),
                speed=k.speed,
                role=NodeRole.MALICIOUS_MITM if i in malicious_set else NodeRole.HONEST,
            )
            for i, k in enumerate(self.kin)
        ]

        m, b = self.rng_crypto.choice(scenario.prime_list)
        self.params = DhParams(m, b)
        self.priv = [PrivateKey(self.rng_crypto.randrange(1, m)) for _ in range(n)]
        self.pub = [gen_public(self.params, p) for p in self.priv]

        # Flows pair node i with node i+N/2.  Every pair runs traffic; a
        # malicious node carries its own flow faithfully and attacks only
        # other nodes' exchanges, so the measured flow population does not
        # drift as the malicious count changes.
        self.flows: list[_Flow] = []
        half = n // 2
        for i in range(half):
            src, dst = i, i + half
            self.flows.append(_Flow(index=i, src=src, dst=dst))
            self.nodes[src].dest_info[dst] = DestInfo(
                pos=self.nodes[dst].pos, pos_time=0.0, speed=self.kin[dst].speed
            )

        self.log = EventLog(flows=[(f.src, f.dst) for f in self.flows])
        self.trace: list[dict] = []
        self.sessions: set[tuple[int, int]] = set()
        self.init_material: dict[tuple[int, int], HandshakeMaterial] = {}
        self.established_keys: dict[tuple[int, int], int] = {}
        self.msg_flow: dict[int, int] = {}
        self._msg_counter = 0
        self._seq = 0
        self.heap: list = []
        self.now = 0.0

    # -- plumbing ------------------------------------------------------------

    def _push(self, t: float, kind: int, payload) -> None:
        self._seq += 1
        heapq.heappush(self.heap, (t, self._seq, kind, payload))

    def _next_msg_id(self, flow_index: int) -> int:
        self._msg_counter += 1
        self.msg_flow[self._msg_counter] = flow_index
        return self._msg_counter

    def _neighbors(self, u: int) -> list[int]:
        pu = self.nodes[u].pos
        rng = self.sc.tx_range
        return [
            v for v, nv in enumerate(self.nodes) if v != u and distance(pu, nv.pos) <= rng
        ]

    def _link_delay(self, u: int, v: int) -> float:
        """Per-hop transmission, lazily establishing a session per new pair."""
        key = (u, v) if u < v else (v, u)
        if key in self.sessions:
            return self.timing.per_hop_tx_delay
        _session, setup = establish(u, v, self.timing)
        self.sessions.add(key)
        return self.timing.per_hop_tx_delay + setup

    def _in_range(self, u: int, v: int) -> bool:
        return distance(self.nodes[u].pos, self.nodes[v].pos) <= self.sc.tx_range

    def _drop_session(self, u: int, v: int) -> None:
        self.sessions.discard((u, v) if u < v else (v, u))

    def _fresh_material(self, node: int) -> HandshakeMaterial:
        """Fresh per-handshake string and nonce over the node's fixed keypair."""
        return HandshakeMaterial(
            private=self.priv[node],
            public=self.pub[node],
            rand_string=RandomString.random(self.sc.k, self.rng_crypto),
            nonce=self.rng_crypto.getrandbits(128).to_bytes(16, "big"),
        )

    def _trace(self, node: int, action: str, reason: str, **extra) -> None:
        if self.sc.trace:
            rec = {"t": self.now, "node": node, "action": action, "reason": reason}
            rec.update(extra)
            self.trace.append(rec)

    # -- run -------------------------------------------------------------------

    def run(self) -> MetricsReport:
        sc = self.sc
        for flow in self.flows:
            for t in gen_traffic(sc.send_rate, sc.sim_duration, self.rng_traffic, sc.packets_per_flow):
                self._push(t, _SEND, flow.index)
        if sc.mobility_tick <= sc.sim_duration:
            self._push(sc.mobility_tick, _TICK, None)

        handlers = {
            _TICK: self._on_tick,
            _SEND: self._on_send,
            _RREQ: self._on_rreq,
            _APPLY: self._on_apply,
            _RREP: self._on_rrep,
            _TIMEOUT: self._on_timeout,
            _RETRY: self._on_retry,
            _INSTALL: self._on_install,
        }
        heap = self.heap
        while heap:
            t, _seq, kind, payload = heapq.heappop(heap)
            self.now = t
            handlers[kind](payload)
        return compute_metrics(self.log)

    # -- mobility ----------------------------------------------------------------

    def _on_tick(self, _payload) -> None:
        dt = self.sc.mobility_tick
        rng = self.rng_mobility
        cfg = self.mob_config
        kin = self.kin
        nodes = self.nodes
        for i, k in enumerate(kin):
            k2 = mob.advance(k, dt, cfg, rng)
            kin[i] = k2
            nodes[i].pos = Vec2(k2.x, k2.y)
        nxt = self.now + dt
        if nxt <= self.sc.sim_duration:
            self._push(nxt, _TICK, None)

    # -- data plane ----------------------------------------------------------------

    def _on_send(self, flow_index: int) -> None:
        flow = self.flows[flow_index]
        self.log.sends.append((flow_index, self.now))
        if flow.route is not None:
            self._walk_route(flow, send_time=self.now)
        else:
            flow.queue.append(self.now)
            self._ensure_discovery(flow)

    def _walk_route(self, flow: _Flow, send_time: float) -> None:
        """Move one packet along the installed route, hop by hop.

        Range and attacker checks use current positions; per-hop delays are
        summed onto the packet.  A range failure surfaces at the source one
        route-timeout later.  In plain modes a packet is lost silently when a
        hop node is malicious or a malicious node interposes on a hop link;
        secure-mode links carry authenticated traffic and are immune once
        their keys exist.
        """
        secure = self.sc.protocol.secure
        nodes = self.nodes
        t = self.now
        route = flow.route
        tx_range = self.sc.tx_range
        for h in range(len(route) - 1):
            a, b = route[h], route[h + 1]
            if distance(nodes[a].pos, nodes[b].pos) > tx_range:
                self._drop_session(a, b)
                self._trace(a, "data-loss", "next-hop-out-of-range", flow=flow.index)
                if not flow.timeout_pending:
                    flow.timeout_pending = True
                    self._push(
                        self.now + self.sc.route_timeout, _TIMEOUT, (flow.index, flow.route_version)
                    )
                return
            t += self._link_delay(a, b)
        if not secure and self.malicious:
            # Attackers stalk a flow where traffic is guaranteed to appear:
            # its fixed endpoints.  A lurking attacker grabs overheard
            # packets with fixed probability, silently (the sender still
            # sees its hop acknowledged, so no timeout fires).
            ps, pd = nodes[flow.src].pos, nodes[flow.dst].pos
            for m in self.malicious:
                if m == flow.src or m == flow.dst:
                    continue  # nodes do not attack their own traffic
                pm = nodes[m].pos
                if distance(pm, ps) <= PREY_RADIUS or distance(pm, pd) <= PREY_RADIUS:
                    if self.rng_attack.random() < CAPTURE_DROP_RATE:
                        self._trace(flow.src, "data-loss", "attacker-capture", flow=flow.index)
                        return
                    break
        self.log.deliveries.append((flow.index, send_time, t))

    def _on_timeout(self, payload) -> None:
        flow_index, version = payload
        flow = self.flows[flow_index]
        flow.timeout_pending = False
        if flow.route is not None and flow.route_version == version:
            flow.route = None
            self._trace(flow.src, "route-invalidated", "timeout", flow=flow_index)
            self._ensure_discovery(flow)

    # -- discovery -------------------------------------------------------------------

    def _ensure_discovery(self, flow: _Flow) -> None:
        if not flow.discovering and self.now <= self.sc.sim_duration:
            self._start_discovery(flow)

    def _start_discovery(self, flow: _Flow) -> None:
        flow.discovering = True
        flow.discovery_count += 1
        if flow.discovery_count > 1:
            self.log.rediscoveries.append((flow.index, self.now))
        msg_id = self._next_msg_id(flow.index)
        flow.current_msg = msg_id
        src_state = self.nodes[flow.src]
        material = None
        if self.sc.protocol.secure:
            material = self._fresh_material(flow.src)
            self.init_material[(flow.src, msg_id)] = material
        # Every failed attempt of this epoch widens the search, so a bad
        # position estimate degenerates toward plain flooding instead of
        # starving the flow.  The zone step is half the distance step: a
        # radius increment grows the searched rectangle in every direction,
        # while an inflated starting distance re-tightens after one hop.
        step = self.sc.tx_range * (0.5 if self.sc.protocol.zone_based else 1.0)
        req = initiate_rreq(
            src_state,
            flow.dst,
            self.sc.protocol,
            self.now,
            msg_id,
            material,
            retry_expansion=flow.failed_attempts * step,
        )
        extra = {}
        if isinstance(req.variant, DlarInfo):
            extra["dist"] = req.variant.dist
        self._trace(
            flow.src, "initiate", self.sc.protocol.value, msg_id=msg_id, flow=flow.index, **extra
        )
        self._broadcast_rreq(flow.src, req)
        self._push(self.now + self.sc.discovery_retry, _RETRY, (flow.index, flow.discovery_count))

    def _on_retry(self, payload) -> None:
        flow_index, count = payload
        flow = self.flows[flow_index]
        if flow.discovering and flow.discovery_count == count:
            flow.discovering = False
            flow.failed_attempts += 1
            self._ensure_discovery(flow)

    def _broadcast_rreq(self, u: int, req: RouteRequest) -> None:
        for v in self._neighbors(u):
            self._push(self.now + self._link_delay(u, v), _RREQ, (req, v, u))

    def _on_rreq(self, payload) -> None:
        req, v, u = payload
        state = self.nodes[v]
        material = None
        if req.secure and not state.seen.seen(req.msg_id):
            material = self._fresh_material(v)
            self.init_material[(v, req.msg_id)] = material
        action = handle_rreq(state, req, self.now, material)
        if isinstance(action, Discard):
            self._trace(v, "discard", action.reason, msg_id=req.msg_id)
            return
        if isinstance(action, StartHandshake):
            self._resolve_handshake(v, u, req, action)
            return
        self._apply_rreq_action(v, action, req.msg_id)

    def _resolve_handshake(self, v: int, u: int, req: RouteRequest, hs: StartHandshake) -> None:
        """Authenticate v with the previous hop u, then apply the gated action.

        Any malicious third party positioned on the u-v path interposes with
        substituted material; a malicious endpoint has nothing to substitute
        in its own exchange.
        """
        initiator = self.init_material[(u, req.msg_id)]
        responder = self._fresh_material(v)
        attacker = None
        flow = self.flows[self.msg_flow[req.msg_id]]
        pu, pv = self.nodes[u].pos, self.nodes[v].pos
        for m in self.malicious:
            if m in (u, v, flow.src, flow.dst):
                continue  # endpoints and owners do not attack their own exchange
            if can_interpose(self.nodes[m].pos, pu, pv, self.sc.tx_range):
                attacker = AttackerContext(material=self._fresh_material(m))
                break
        outcome = run_handshake(
            self.params, initiator, responder, self.timing, OobChannel(u, v), attacker
        )
        if isinstance(outcome, MitmDetected):
            self.log.mitm_detections.append((self.msg_flow[req.msg_id], self.now))
            self._trace(v, "mitm-detected", outcome.reason, msg_id=req.msg_id, peer=u)
            # The tampered copy was never accepted: a clean copy offered by
            # another neighbor may still bring v into the route.
            self.nodes[v].seen.remove(req.msg_id)
            return
        key = (u, v) if u < v else (v, u)
        self.established_keys[key] = outcome.initiator_key.key
        delay = outcome.delay
        if self.sc.protocol.zone_based:
            # The zone variant's association runs one more in-band phase
            # (six against the distance variant's five).
            delay += self.timing.per_hop_tx_delay
        self._push(self.now + delay, _APPLY, (v, hs.then, req.msg_id))

    def _on_apply(self, payload) -> None:
        v, action, msg_id = payload
        self._apply_rreq_action(v, action, msg_id)

    def _apply_rreq_action(self, v: int, action: Union[Forward, Reply], msg_id: int) -> None:
        if isinstance(action, Forward):
            req = action.request
            extra = {"trace": list(req.hop_trace)}
            if isinstance(req.variant, DlarInfo):
                extra["dist"] = req.variant.dist
            else:
                zone = req.variant.zone
                extra["zone"] = (
                    zone.min_corner.x,
                    zone.min_corner.y,
                    zone.max_corner.x,
                    zone.max_corner.y,
                )
            self._trace(
                v,
                "forward",
                self.sc.protocol.value,
                msg_id=msg_id,
                pos=(self.nodes[v].pos.x, self.nodes[v].pos.y),
                **extra,
            )
            self._broadcast_rreq(v, req)
        else:
            rep = action.reply
            self._trace(v, "reply", self.sc.protocol.value, msg_id=msg_id)
            if self.sc.reply_mode == "flood":
                self._broadcast_rrep(v, rep)
            else:
                self._walk_reply(v, rep)

    # -- replies -----------------------------------------------------------------------

    def _walk_reply(self, start: int, rep: RouteReply) -> None:
        """Unicast the reply back along the reverse path, collapsing the walk.

        If the next reverse hop moved out of range the remainder is flooded
        from the break point.
        """
        t = self.now
        node = start
        src = rep.reverse_path[-1]
        while node != src:
            try:
                action = handle_rrep(
                    self.nodes[node], rep, reachable=lambda x: self._in_range(node, x)
                )
            except BrokenReversePath:
                self._trace(node, "reply-break", "reverse-hop-out-of-range", msg_id=rep.msg_id)
                self._push(t, _RREP, (rep, node, node, True))
                return
            assert isinstance(action, ForwardReverse)
            t += self._link_delay(node, action.next_hop)
            node = action.next_hop
        self._push(t, _INSTALL, (rep, src))

    def _broadcast_rrep(self, u: int, rep: RouteReply) -> None:
        for v in self._neighbors(u):
            self._push(self.now + self._link_delay(u, v), _RREP, (rep, v, u, False))

    def _on_rrep(self, payload) -> None:
        rep, v, _u, resume_flood = payload
        state = self.nodes[v]
        dedup_key = ("rep", rep.msg_id)
        if resume_flood:
            # Fallback flood resumes from the break point on the reverse path.
            state.seen.add(dedup_key)
            self._broadcast_rrep(v, rep)
            return
        if state.seen.seen(dedup_key):
            return
        state.seen.add(dedup_key)
        if v == rep.reverse_path[-1]:
            self._install_route(rep, v)
        else:
            self._broadcast_rrep(v, rep)

    def _on_install(self, payload) -> None:
        rep, node = payload
        self._install_route(rep, node)

    def _install_route(self, rep: RouteReply, src: int) -> None:
        flow = self.flows[self.msg_flow[rep.msg_id]]
        if not flow.discovering:
            return
        action = handle_rrep(self.nodes[src], rep)
        flow.route = action.route
        flow.route_version += 1
        flow.discovering = False
        flow.current_msg = None
        flow.failed_attempts = 0
        self._trace(src, "route-installed", "reply", flow=flow.index, hops=len(action.route) - 1)
        # Queued packets obey the same discipline as in-flight ones: one
        # route-timeout without transmission and they are casualties.
        horizon = self.now - self.sc.route_timeout
        queued, flow.queue = flow.queue, []
        for send_time in queued:
            if send_time < horizon:
                self._trace(flow.src, "data-loss", "queue-expired", flow=flow.index)
                continue
            self._walk_route(flow, send_time=send_time)


def run(scenario: Scenario) -> MetricsReport:
    """Run one scenario to completion and aggregate its metrics."""
    return Simulation(scenario).run()
