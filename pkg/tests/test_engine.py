"""Engine tests: traffic laws, adjacency, metrics, determinism."""

import json
import random

import pytest

from larsim.engine import (
    ConfigError,
    EventLog,
    Scenario,
    Simulation,
    compute_metrics,
    gen_traffic,
    neighbor_discovery,
    run,
)
from larsim.geo import Vec2, distance
from larsim.routing import Protocol


class TestScenarioValidation:
    def test_odd_node_count_rejected(self):
        with pytest.raises(ConfigError):
            Scenario(node_count=11).validate()

    def test_malicious_bound(self):
        with pytest.raises(ConfigError):
            Scenario(node_count=10, malicious_count=10).validate()

    def test_bad_reply_mode(self):
        with pytest.raises(ConfigError):
            Scenario(node_count=10, reply_mode="smoke-signals").validate()

    def test_bad_speed_range(self):
        with pytest.raises(ConfigError):
            Scenario(node_count=10, node_speed=(40.0, 2.0)).validate()


class TestGenTraffic:
    def test_mean_interarrival(self):
        rng = random.Random(0)
        times = gen_traffic(50.0, 300.0, rng)
        gaps = [b - a for a, b in zip(times, times[1:])]
        assert len(gaps) > 10_000
        assert sum(gaps) / len(gaps) == pytest.approx(0.02, rel=0.03)

    def test_zero_duration_empty(self):
        assert gen_traffic(50.0, 0.0, random.Random(1)) == []

    def test_fixed_seed_identical(self):
        assert gen_traffic(50.0, 10.0, random.Random(7)) == gen_traffic(50.0, 10.0, random.Random(7))

    def test_times_sorted_within_duration(self):
        times = gen_traffic(50.0, 10.0, random.Random(3))
        assert times == sorted(times)
        assert all(0 < t <= 10.0 for t in times)

    def test_max_packets_cap(self):
        assert len(gen_traffic(50.0, 10.0, random.Random(3), max_packets=100)) == 100


class TestNeighborDiscovery:
    def test_adjacent_at_150(self):
        adj = neighbor_discovery([Vec2(0, 0), Vec2(150, 0)], 200.0)
        assert adj == {0: [1], 1: [0]}

    def test_not_adjacent_at_250(self):
        adj = neighbor_discovery([Vec2(0, 0), Vec2(250, 0)], 200.0)
        assert adj == {0: [], 1: []}

    def test_matches_brute_force_oracle(self):
        rng = random.Random(5)
        for _ in range(20):
            pts = [Vec2(rng.uniform(0, 1000), rng.uniform(0, 1000)) for _ in range(60)]
            adj = neighbor_discovery(pts, 200.0)
            for i in range(len(pts)):
                expected = sorted(
                    j for j in range(len(pts)) if j != i and distance(pts[i], pts[j]) <= 200.0
                )
                assert adj[i] == expected

    def test_symmetric_irreflexive(self):
        rng = random.Random(9)
        pts = [Vec2(rng.uniform(0, 500), rng.uniform(0, 500)) for _ in range(40)]
        adj = neighbor_discovery(pts, 150.0)
        for i, nbrs in adj.items():
            assert i not in nbrs
            for j in nbrs:
                assert i in adj[j]


class TestComputeMetrics:
    def test_delivery_percentage(self):
        log = EventLog(flows=[(0, 5)])
        log.sends = [(0, t / 10) for t in range(100)]
        log.deliveries = [(0, t / 10, t / 10 + 0.02) for t in range(82)]
        report = compute_metrics(log)
        assert report.delivery_pct == pytest.approx(82.0)

    def test_mean_delay(self):
        log = EventLog(flows=[(0, 5)])
        log.sends = [(0, 0.0), (0, 1.0), (0, 2.0)]
        log.deliveries = [(0, 0.0, 0.020), (0, 1.0, 1.030), (0, 2.0, 2.040)]
        report = compute_metrics(log)
        assert report.avg_total_delay == pytest.approx(0.030)

    def test_zero_delivered(self):
        log = EventLog(flows=[(0, 5)])
        log.sends = [(0, 0.0)]
        report = compute_metrics(log)
        assert report.delivery_pct == 0.0
        assert report.avg_total_delay is None

    def test_per_flow_split(self):
        log = EventLog(flows=[(0, 2), (1, 3)])
        log.sends = [(0, 0.0), (1, 0.0), (1, 0.1)]
        log.deliveries = [(1, 0.0, 0.01)]
        report = compute_metrics(log)
        assert report.flows[0].packets_delivered == 0
        assert report.flows[1].packets_delivered == 1
        assert report.packets_sent == 3


DENSE = dict(node_count=10, region_width=100.0, region_height=100.0)


class TestRun:
    def test_dense_plain_dlar_delivers_everything(self):
        report = run(Scenario(protocol=Protocol.DLAR, seed=3, **DENSE))
        assert report.delivery_pct == 100.0

    def test_determinism_byte_identical(self):
        sc = Scenario(node_count=20, protocol=Protocol.SECURE_DLAR, seed=5, malicious_count=2,
                      sim_duration=3.0)
        a = json.dumps(run(sc).to_dict(), sort_keys=True)
        b = json.dumps(run(sc).to_dict(), sort_keys=True)
        assert a == b

    def test_expected_packets_per_flow(self):
        counts = []
        for seed in range(5):
            sc = Scenario(node_count=4, seed=seed, region_width=50.0, region_height=50.0)
            report = run(sc)
            for f in report.flows:
                counts.append(f.packets_sent)
        assert sum(counts) / len(counts) == pytest.approx(500, rel=0.10)

    def test_delivered_never_exceeds_sent(self):
        for seed in range(3):
            report = run(Scenario(node_count=20, seed=seed, malicious_count=2, sim_duration=3.0))
            assert report.packets_delivered <= report.packets_sent
            for f in report.flows:
                assert f.packets_delivered <= f.packets_sent

    def test_zero_malicious_secure_matches_plain_delivery(self):
        # All nodes mutually in range: single-hop routes, no handshake can
        # fail, so security adds delay but loses nothing.
        plain = run(Scenario(protocol=Protocol.DLAR, seed=7, **DENSE))
        secure = run(Scenario(protocol=Protocol.SECURE_DLAR, seed=7, **DENSE))
        assert plain.packets_sent == secure.packets_sent
        assert plain.packets_delivered == secure.packets_delivered
        assert secure.avg_total_delay > plain.avg_total_delay
        assert secure.mitm_detections == 0

    def test_trace_times_non_decreasing(self):
        sim = Simulation(
            Scenario(node_count=20, protocol=Protocol.SECURE_RLAR, seed=1, malicious_count=2,
                     sim_duration=2.0, trace=True)
        )
        sim.run()
        times = [rec["t"] for rec in sim.trace]
        assert times == sorted(times)
        assert len(times) > 0

    def test_flows_pair_i_with_i_plus_half(self):
        sim = Simulation(Scenario(node_count=10, seed=0))
        for f in sim.flows:
            assert f.dst == f.src + 5

    def test_flow_population_is_stable_across_malicious_counts(self):
        base = Simulation(Scenario(node_count=20, seed=2))
        attacked = Simulation(Scenario(node_count=20, seed=2, malicious_count=6))
        assert len(set(attacked.malicious)) == 6
        assert [(f.src, f.dst) for f in base.flows] == [
            (f.src, f.dst) for f in attacked.flows
        ]

    def test_malicious_sets_nest_across_counts(self):
        small = set(Simulation(Scenario(node_count=20, seed=4, malicious_count=2)).malicious)
        large = set(Simulation(Scenario(node_count=20, seed=4, malicious_count=6)).malicious)
        assert small <= large

    def test_mitm_detections_counted_under_attack(self):
        report = run(
            Scenario(node_count=40, protocol=Protocol.SECURE_DLAR, seed=0, malicious_count=8,
                     sim_duration=3.0)
        )
        assert report.mitm_detections > 0

    def test_reply_flood_mode_delivers(self):
        report = run(Scenario(protocol=Protocol.DLAR, seed=3, reply_mode="flood", **DENSE))
        assert report.delivery_pct == 100.0
