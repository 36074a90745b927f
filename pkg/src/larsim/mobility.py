"""Random-direction motion with exponential legs and bounce-back walls.

Each node travels straight at its own constant speed, redraws a uniform
heading after an exponentially distributed leg, and reflects off the walls
of the square region, finishing the step with the remaining distance.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, slots=True)
class MobilityConfig:
    region_width: float = 1000.0
    region_height: float = 1000.0
    speed_min: float = 2.0
    speed_max: float = 40.0
    mean_leg: float = 25.0

    def __post_init__(self) -> None:
        if min(self.region_width, self.region_height, self.speed_min, self.mean_leg) <= 0:
            raise ValueError("mobility parameters must be positive")
        if self.speed_min > self.speed_max:
            raise ValueError("speed_min exceeds speed_max")

    @classmethod
    def fixed_speed(cls, speed: float, **kwargs) -> "MobilityConfig":
        """All nodes move at one configured speed (per-scenario sweeps)."""
        return cls(speed_min=speed, speed_max=speed, **kwargs)


@dataclass(frozen=True, slots=True)
class Kinematics:
    """A node's position plus the straight leg it is currently traveling."""

    x: float
    y: float
    heading: float
    speed: float
    leg_remaining: float


def draw_leg(config: MobilityConfig, rng: random.Random) -> float:
    """Leg length until the next random direction change (exponential law)."""
    return rng.expovariate(1.0 / config.mean_leg)


def sample_initial(config: MobilityConfig, rng: random.Random) -> Kinematics:
    """Uniform position and heading, uniform per-node speed, fresh leg."""
    return Kinematics(
        x=rng.uniform(0.0, config.region_width),
        y=rng.uniform(0.0, config.region_height),
        heading=rng.uniform(0.0, TWO_PI),
        speed=rng.uniform(config.speed_min, config.speed_max),
        leg_remaining=draw_leg(config, rng),
    )


def advance(
    k: Kinematics,
    dt: float,
    config: MobilityConfig,
    rng: random.Random,
    leg_sink: list[float] | None = None,
) -> Kinematics:
    """Move a node for dt seconds, handling leg expiry and wall bounces.

    A leg that runs out mid-step triggers a fresh uniform heading and a fresh
    exponential leg for the residual distance.  Hitting a wall reflects the
    violating velocity component and the residual distance continues in the
    reflected direction; a corner reflects both components.  Fresh legs are
    appended to leg_sink when provided (test instrumentation).
    """
    if dt < 0:
        raise ValueError(f"dt must be >= 0, got {dt}")
    x, y, heading, speed, leg = k.x, k.y, k.heading, k.speed, k.leg_remaining
    travel = speed * dt
    if travel == 0.0:
        return k
    w, h = config.region_width, config.region_height
    dx, dy = math.cos(heading), math.sin(heading)

    while travel > 1e-12:
        if leg <= 0.0:
            heading = rng.uniform(0.0, TWO_PI)
            dx, dy = math.cos(heading), math.sin(heading)
            leg = draw_leg(config, rng)
            if leg_sink is not None:
                leg_sink.append(leg)
        # Distance to the nearest wall along the current direction.
        wall = math.inf
        if dx > 0:
            wall = (w - x) / dx
        elif dx < 0:
            wall = -x / dx
        if dy > 0:
            wall = min(wall, (h - y) / dy)
        elif dy < 0:
            wall = min(wall, -y / dy)
        if wall <= 0.0:
            # Already touching a wall and heading outward: bounce in place.
            if (dx > 0 and x >= w) or (dx < 0 and x <= 0):
                dx = -dx
            if (dy > 0 and y >= h) or (dy < 0 and y <= 0):
                dy = -dy
            heading = math.atan2(dy, dx) % TWO_PI
            x = min(max(x, 0.0), w)
            y = min(max(y, 0.0), h)
            continue
        step = min(travel, leg, wall)
        x += dx * step
        y += dy * step
        travel -= step
        leg -= step
        if step == wall:
            # Wall reached before the step budget ran out: bounce back.
            if dx > 0 and x >= w - 1e-9:
                dx = -dx
            elif dx < 0 and x <= 1e-9:
                dx = -dx
            if dy > 0 and y >= h - 1e-9:
                dy = -dy
            elif dy < 0 and y <= 1e-9:
                dy = -dy
            heading = math.atan2(dy, dx) % TWO_PI
            # Clamp the touch point exactly onto the boundary.
            x = min(max(x, 0.0), w)
            y = min(max(y, 0.0), h)

    return Kinematics(x=x, y=y, heading=heading, speed=speed, leg_remaining=leg)
