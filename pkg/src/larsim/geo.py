"""Euclidean geometry for expected zones, request zones, and membership tests.

The source of a route discovery predicts where the destination can be
(a disc grown at the destination's average speed) and restricts forwarding
to the smallest axis-aligned rectangle covering itself and that disc.
All coordinates are abstract units; everything here is pure and immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class Vec2:
    x: float
    y: float


@dataclass(frozen=True, slots=True)
class ExpectedZone:
    """Disc where the destination can be: grown at its speed since last fix."""

    center: Vec2
    radius: float

    def __post_init__(self) -> None:
        if self.radius < 0:
            raise ValueError(f"expected-zone radius must be >= 0, got {self.radius}")


@dataclass(frozen=True, slots=True)
class RequestZone:
    """Axis-aligned closed rectangle; only nodes inside it relay a request."""

    min_corner: Vec2
    max_corner: Vec2

    def __post_init__(self) -> None:
        if self.min_corner.x > self.max_corner.x or self.min_corner.y > self.max_corner.y:
            raise ValueError("request-zone corners are not ordered")


def distance(a: Vec2, b: Vec2) -> float:
    """Euclidean distance between two points."""
    return math.hypot(a.x - b.x, a.y - b.y)


def expected_zone(dest_pos: Vec2, avg_speed: float, t0: float, t1: float) -> ExpectedZone:
    """Disc of radius avg_speed * (t1 - t0) centered on the last known position.

    The destination was at dest_pos at time t0 and moves at avg_speed, so by
    t1 it cannot have strayed farther than the returned radius.
    """
    if t1 < t0:
        raise ValueError(f"t1 ({t1}) precedes t0 ({t0})")
    if avg_speed < 0:
        raise ValueError(f"avg_speed must be >= 0, got {avg_speed}")
    return ExpectedZone(center=dest_pos, radius=avg_speed * (t1 - t0))


def request_zone(src_pos: Vec2, ez: ExpectedZone) -> RequestZone:
    """Smallest axis-aligned rectangle containing src_pos and the whole disc.

    When the source already lies inside the disc this degenerates to the
    disc's bounding box; otherwise the rectangle stretches to the source.
    """
    c, r = ez.center, ez.radius
    return RequestZone(
        min_corner=Vec2(min(src_pos.x, c.x - r), min(src_pos.y, c.y - r)),
        max_corner=Vec2(max(src_pos.x, c.x + r), max(src_pos.y, c.y + r)),
    )


def contains(zone: RequestZone, p: Vec2) -> bool:
    """Closed-rectangle membership: boundary points count as inside."""
    return (
        zone.min_corner.x <= p.x <= zone.max_corner.x
        and zone.min_corner.y <= p.y <= zone.max_corner.y
    )
