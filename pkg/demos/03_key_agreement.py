"""Two neighbors agree on a key; then a man-in-the-middle tries its luck.

Shows the full exchange: commitment with the route request, the peer's
reply, the opening, the XOR authentication strings compared out-of-band,
and the shared keys.  Then the same exchange with an active interposer.
"""

import random

from larsim.crypto import DhParams, auth_string
from larsim.link import LinkTiming, OobChannel
from larsim.routing import (
    AttackerContext,
    Established,
    HandshakeMaterial,
    MitmDetected,
    run_handshake,
)

params = DhParams(2305843009213693951, 5)
timing = LinkTiming()
rng = random.Random(11)

sender = HandshakeMaterial.draw(params, 10, rng)
receiver = HandshakeMaterial.draw(params, 10, rng)
print(f"sender   random string: {sender.rand_string}")
print(f"receiver random string: {receiver.rand_string}")
print(f"auth string (either side): {auth_string(sender.rand_string, receiver.rand_string)}")

outcome = run_handshake(params, sender, receiver, timing, OobChannel(1, 2))
assert isinstance(outcome, Established)
print(f"honest run: established, keys equal = {outcome.initiator_key == outcome.responder_key}")
print(f"shared key: {outcome.initiator_key.key}")
print(f"handshake delay: {outcome.delay * 1000:.1f} ms\n")

# An interposer substitutes both in-band messages with its own material.
attacker = AttackerContext(material=HandshakeMaterial.draw(params, 10, rng))
outcome = run_handshake(params, sender, receiver, timing, OobChannel(1, 2), attacker)
assert isinstance(outcome, MitmDetected)
print(f"active interposer: detected via {outcome.reason}")
print(f"keys at either end: {outcome.initiator_state.shared} / {outcome.responder_state.shared}")

# A passive relay changes nothing and is (by design) not detectable.
passive = AttackerContext(
    material=HandshakeMaterial.draw(params, 10, rng),
    substitute_peer_msg=False,
    substitute_open=False,
)
outcome = run_handshake(params, sender, receiver, timing, OobChannel(1, 2), passive)
print(f"passive relay: {'established' if isinstance(outcome, Established) else 'detected'}")
