"""Location-aided routing for vehicular networks, plain and secure.

The package splits into geometry (``geo``), node motion (``mobility``), the
key-agreement primitives (``crypto``), pairwise link setup (``link``), the
routing protocols and attacker model (``routing``), the discrete-event
engine (``engine``), and the experiment runner (``cli``).
"""

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
    mod_pow,
    open_verify,
    shared_key,
)
from .engine import (
    ConfigError,
    EventLog,
    MetricsReport,
    Scenario,
    Simulation,
    compute_metrics,
    gen_traffic,
    neighbor_discovery,
    run,
)
from .geo import ExpectedZone, RequestZone, Vec2, contains, distance, expected_zone, request_zone
from .link import LinkTiming, OobChannel, OutOfRange, WfdPhase, WfdSession, establish, oob_compare
from .mobility import Kinematics, MobilityConfig, advance, sample_initial
from .routing import (
    NodeRole,
    Protocol,
    RouteReply,
    RouteRequest,
    RouterState,
    run_handshake,
    select_alternate_neighbor,
)

__version__ = "0.1.0"
