"""Watch a node wander: exponential legs, random turns, wall bounces."""

import random

from larsim.mobility import MobilityConfig, advance, sample_initial

config = MobilityConfig.fixed_speed(25.0)
rng = random.Random(7)
node = sample_initial(config, rng)
print(f"start at ({node.x:7.1f}, {node.y:7.1f}), heading {node.heading:.2f} rad")

legs: list[float] = []
for step in range(1, 401):
    node = advance(node, 0.1, config, rng, leg_sink=legs)
    if step % 50 == 0:
        print(
            f"t={step / 10.0:5.1f}s  pos ({node.x:7.1f}, {node.y:7.1f})  "
            f"leg remaining {node.leg_remaining:6.1f}"
        )

print(f"\n{len(legs)} direction changes over 40 s of travel")
print(f"mean drawn leg {sum(legs) / len(legs):.1f} units (law says 25)")

# Boundaries are never crossed, however long the walk runs.
worst = max(max(node.x - 1000.0, -node.x), max(node.y - 1000.0, -node.y))
print(f"worst boundary excursion: {max(worst, 0.0):.2e} units")
