"""Motion model tests: sampling laws, reflection arithmetic, containment."""

import math
import random

import pytest

from larsim.mobility import Kinematics, MobilityConfig, advance, sample_initial


def make_config(**kwargs):
    return MobilityConfig(**kwargs)


class TestConfig:
    def test_defaults(self):
        cfg = MobilityConfig()
        assert (cfg.region_width, cfg.region_height) == (1000.0, 1000.0)
        assert (cfg.speed_min, cfg.speed_max) == (2.0, 40.0)
        assert cfg.mean_leg == 25.0

    def test_rejects_bad_speed_order(self):
        with pytest.raises(ValueError):
            MobilityConfig(speed_min=10, speed_max=5)

    def test_fixed_speed_mode(self):
        cfg = MobilityConfig.fixed_speed(5.0)
        assert cfg.speed_min == cfg.speed_max == 5.0


class TestSampleInitial:
    def test_statistics(self):
        cfg = MobilityConfig()
        rng = random.Random(1)
        samples = [sample_initial(cfg, rng) for _ in range(10_000)]
        mean_speed = sum(k.speed for k in samples) / len(samples)
        assert mean_speed == pytest.approx(21.0, rel=0.05)
        mean_leg = sum(k.leg_remaining for k in samples) / len(samples)
        assert mean_leg == pytest.approx(25.0, rel=0.05)
        assert all(0 <= k.x <= 1000 and 0 <= k.y <= 1000 for k in samples)
        assert all(0 <= k.heading < 2 * math.pi for k in samples)


class TestAdvance:
    def test_straight_step(self):
        cfg = MobilityConfig()
        k = Kinematics(x=100, y=100, heading=0.0, speed=5.0, leg_remaining=25.0)
        k2 = advance(k, 1.0, cfg, random.Random(0))
        assert (k2.x, k2.y) == (105.0, 100.0)
        assert k2.leg_remaining == pytest.approx(20.0)

    def test_reflection_arithmetic(self):
        cfg = MobilityConfig()
        k = Kinematics(x=995, y=500, heading=0.0, speed=10.0, leg_remaining=1e9)
        k2 = advance(k, 1.0, cfg, random.Random(0))
        assert k2.x == pytest.approx(995.0)
        assert k2.y == pytest.approx(500.0)
        assert k2.heading == pytest.approx(math.pi)

    def test_leg_expiry_draws_new_heading_and_leg(self):
        cfg = MobilityConfig()
        rng = random.Random(5)
        legs: list[float] = []
        k = Kinematics(x=500, y=500, heading=0.0, speed=5.0, leg_remaining=2.0)
        k2 = advance(k, 1.0, cfg, rng, leg_sink=legs)
        assert len(legs) == 1
        # 2 units east, then 3 along the fresh heading.
        expected_x = 502.0 + 3.0 * math.cos(k2.heading)
        expected_y = 500.0 + 3.0 * math.sin(k2.heading)
        if legs[0] >= 3.0:  # no second redraw happened
            assert (k2.x, k2.y) == (pytest.approx(expected_x), pytest.approx(expected_y))

    def test_fresh_legs_are_exponential_mean_25(self):
        cfg = MobilityConfig.fixed_speed(30.0)
        rng = random.Random(9)
        legs: list[float] = []
        k = sample_initial(cfg, rng)
        while len(legs) < 10_000:
            k = advance(k, 1.0, cfg, rng, leg_sink=legs)
        mean = sum(legs) / len(legs)
        assert mean == pytest.approx(25.0, rel=0.05)

    def test_zero_dt_is_identity(self):
        cfg = MobilityConfig()
        rng = random.Random(3)
        k = sample_initial(cfg, rng)
        assert advance(k, 0.0, cfg, rng) == k

    def test_rejects_negative_dt(self):
        cfg = MobilityConfig()
        with pytest.raises(ValueError):
            advance(sample_initial(cfg, random.Random(0)), -1.0, cfg, random.Random(0))

    def test_containment_under_many_steps(self):
        cfg = MobilityConfig()
        rng = random.Random(17)
        nodes = [sample_initial(cfg, rng) for _ in range(50)]
        for _ in range(2000):
            for i, k in enumerate(nodes):
                nodes[i] = advance(k, 0.01, cfg, rng)
        for k in nodes:
            assert 0.0 <= k.x <= cfg.region_width
            assert 0.0 <= k.y <= cfg.region_height
            assert k.leg_remaining >= 0.0

    def test_split_step_equals_whole_step(self):
        cfg = MobilityConfig()
        for seed in range(20):
            k0 = sample_initial(cfg, random.Random(seed))
            whole = advance(k0, 0.8, cfg, random.Random(1000 + seed))
            rng = random.Random(1000 + seed)
            split = advance(advance(k0, 0.5, cfg, rng), 0.3, cfg, rng)
            assert split.x == pytest.approx(whole.x, abs=1e-9)
            assert split.y == pytest.approx(whole.y, abs=1e-9)
            assert split.heading == pytest.approx(whole.heading, abs=1e-9)
            assert split.leg_remaining == pytest.approx(whole.leg_remaining, abs=1e-9)

    def test_corner_bounce_reflects_both_components(self):
        cfg = MobilityConfig()
        k = Kinematics(x=999, y=999, heading=math.pi / 4, speed=4.0, leg_remaining=1e9)
        k2 = advance(k, 1.0, cfg, random.Random(0))
        assert 0.0 <= k2.x <= 1000.0 and 0.0 <= k2.y <= 1000.0
        # Heading flipped into the third quadrant after hitting the corner.
        assert math.cos(k2.heading) < 0 and math.sin(k2.heading) < 0
