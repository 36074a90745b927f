"""Where does a source search for a destination it last saw a while ago?

Walks through the two request-zone cases: the source outside the
destination's expected disc, and inside it.
"""

from larsim import Vec2, contains, distance, expected_zone, request_zone

# The source sits at the origin; it saw the destination at (500, 500) at
# t=0 moving at 10 units/sec, and wants a route at t=5.
src = Vec2(0.0, 0.0)
ez = expected_zone(Vec2(500.0, 500.0), avg_speed=10.0, t0=0.0, t1=5.0)
print(f"expected zone: center ({ez.center.x:.0f}, {ez.center.y:.0f}), radius {ez.radius:.0f}")

zone = request_zone(src, ez)
print(
    f"request zone: [{zone.min_corner.x:.0f}, {zone.max_corner.x:.0f}] x "
    f"[{zone.min_corner.y:.0f}, {zone.max_corner.y:.0f}]"
)
print(f"source inside expected disc? {distance(src, ez.center) <= ez.radius}")

for p in (Vec2(300, 200), Vec2(600, 100), Vec2(550, 550)):
    print(f"  node at ({p.x:.0f}, {p.y:.0f}) relays? {contains(zone, p)}")

# When the source is already inside the disc, the rectangle degenerates to
# the disc's bounding box.
near = Vec2(500.0, 480.0)
zone2 = request_zone(near, ez)
print(
    f"\nsource at ({near.x:.0f}, {near.y:.0f}) inside the disc -> zone "
    f"[{zone2.min_corner.x:.0f}, {zone2.max_corner.x:.0f}] x "
    f"[{zone2.min_corner.y:.0f}, {zone2.max_corner.y:.0f}]"
)
