"""Experiment runner: single scenarios and the three sweep families.

``larsim run`` executes one scenario and prints its report; ``larsim sweep``
executes a family of scenarios (node density, malicious count, or node
speed) across protocols and seeds, writes one CSV row per run, and prints a
seed-averaged summary.  Scenario parameters come from an optional flat
key=value config file; command-line flags win over file values.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

from .engine import ConfigError, MetricsReport, Scenario, Simulation
from .link import LinkTiming
from .routing import Protocol

CSV_COLUMNS = [
    "family",
    "sweep_value",
    "protocol",
    "seed",
    "nodes",
    "malicious",
    "speed",
    "sent",
    "delivered",
    "delivery_pct",
    "avg_delay_ms",
    "mitm_detections",
    "rediscoveries",
]

SWEEP_FAMILIES = {
    "density": list(range(10, 101, 10)),
    "malicious": list(range(2, 13, 2)),
    "speed": list(range(5, 41, 5)),
}

_SCENARIO_KEYS = {
    "node_count": int,
    "protocol": str,
    "seed": int,
    "sim_duration": float,
    "send_rate": float,
    "packets_per_flow": int,
    "node_speed": str,
    "malicious_count": int,
    "malicious_fraction": float,
    "tx_range": float,
    "region_width": float,
    "region_height": float,
    "k": int,
    "mean_leg": float,
    "mobility_tick": float,
    "route_timeout": float,
    "discovery_retry": float,
    "reply_mode": str,
    "timing_discovery": float,
    "timing_go_negotiation": float,
    "timing_wps": float,
    "timing_addr_config": float,
    "timing_per_hop_tx": float,
    "timing_oob": float,
}


def parse_protocol(name: str) -> Protocol:
    try:
        return Protocol(name)
    except ValueError:
        valid = ", ".join(p.value for p in Protocol)
        raise ConfigError(f"unknown protocol {name!r}; valid protocols: {valid}")


def _parse_speed(text: str):
    if ":" in text:
        lo, hi = text.split(":", 1)
        return (float(lo), float(hi))
    return float(text)


def read_config(path: str) -> dict:
    """Flat key = value lines; blank lines and # comments are ignored."""
    cfg: dict = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in _SCENARIO_KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
            cfg[key] = value
    return cfg


def build_scenario(cfg: dict) -> Scenario:
    """Turn a flat string-valued config dict into a validated Scenario."""
    values: dict = {}
    timing_kwargs: dict = {}
    malicious_fraction = None
    for key, raw in cfg.items():
        if key not in _SCENARIO_KEYS:
            raise ConfigError(f"unknown config key {key!r}")
        caster = _SCENARIO_KEYS[key]
        try:
            value = caster(raw) if not isinstance(raw, (int, float, tuple)) else raw
        except ValueError:
            raise ConfigError(f"config key {key}: cannot parse {raw!r}")
        if key == "protocol":
            values[key] = parse_protocol(value if isinstance(value, str) else raw)
        elif key == "node_speed":
            values[key] = _parse_speed(raw) if isinstance(raw, str) else raw
        elif key == "malicious_fraction":
            malicious_fraction = float(raw)
        elif key.startswith("timing_"):
            field = {"timing_per_hop_tx": "per_hop_tx_delay", "timing_oob": "oob_delay"}.get(
                key, key.removeprefix("timing_")
            )
            timing_kwargs[field] = float(raw)
        else:
            values[key] = value
    if "node_count" not in values:
        raise ConfigError("node_count is required")
    if malicious_fraction is not None:
        if "malicious_count" in values:
            raise ConfigError("give malicious_count or malicious_fraction, not both")
        values["malicious_count"] = round(malicious_fraction * values["node_count"])
    if timing_kwargs:
        values["timing"] = LinkTiming(**timing_kwargs)
    try:
        scenario = Scenario(**values)
    except TypeError as exc:
        raise ConfigError(str(exc))
    scenario.validate()
    return scenario


# ---------------------------------------------------------------------------
# Sweeps


def sweep_scenarios(
    family: str, protocols: list[Protocol], seeds: int, base: dict | None = None
) -> list[tuple[int, Protocol, int, Scenario]]:
    """All (sweep value, protocol, seed, scenario) jobs of one family, in order."""
    if family not in SWEEP_FAMILIES:
        raise ConfigError(f"unknown family {family!r}; valid families: {', '.join(SWEEP_FAMILIES)}")
    base = dict(base or {})
    base.pop("protocol", None)
    base.pop("seed", None)
    jobs = []
    for value in SWEEP_FAMILIES[family]:
        params = dict(base)
        if family == "density":
            params["node_count"] = value
            params.setdefault("node_speed", 5.0)
            params["malicious_count"] = round(0.10 * value)
        elif family == "malicious":
            params.setdefault("node_count", 40)
            params.setdefault("node_speed", 5.0)
            params["malicious_count"] = value
        else:
            params.setdefault("node_count", 40)
            params["node_speed"] = float(value)
            params["malicious_count"] = round(0.10 * params["node_count"])
        for protocol in protocols:
            for seed in range(seeds):
                scenario = build_scenario({**params, "protocol": protocol.value, "seed": seed})
                jobs.append((value, protocol, seed, scenario))
    return jobs


def _run_job(job) -> tuple:
    value, protocol, seed, scenario = job
    report = Simulation(scenario).run()
    return value, protocol.value, seed, scenario, report


def _speed_label(speed) -> str:
    if isinstance(speed, tuple):
        return f"{speed[0]:g}:{speed[1]:g}"
    return f"{speed:g}"


def report_row(family: str, value, protocol: str, seed: int, sc: Scenario, rep: MetricsReport) -> dict:
    return {
        "family": family,
        "sweep_value": value,
        "protocol": protocol,
        "seed": seed,
        "nodes": sc.node_count,
        "malicious": sc.malicious_count,
        "speed": _speed_label(sc.node_speed),
        "sent": rep.packets_sent,
        "delivered": rep.packets_delivered,
        "delivery_pct": repr(rep.delivery_pct),
        "avg_delay_ms": "" if rep.avg_total_delay is None else repr(rep.avg_total_delay * 1000.0),
        "mitm_detections": rep.mitm_detections,
        "rediscoveries": rep.route_rediscoveries,
    }


def run_sweep(
    family: str,
    protocols: list[Protocol],
    seeds: int,
    out_path: str,
    base: dict | None = None,
    workers: int | None = None,
) -> list[dict]:
    """Run a whole family and write its CSV; returns the rows in order."""
    jobs = sweep_scenarios(family, protocols, seeds, base)
    if workers is None:
        workers = min(os.cpu_count() or 1, 8)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_job, jobs, chunksize=4))
    else:
        results = [_run_job(job) for job in jobs]
    rows = [
        report_row(family, value, protocol, seed, scenario, report)
        for value, protocol, seed, scenario, report in results
    ]
    with open(out_path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return rows


def summarize(rows: list[dict]) -> list[dict]:
    """Seed-averaged delivery and delay per (sweep value, protocol)."""
    groups: dict[tuple, list[dict]] = {}
    for row in rows:
        groups.setdefault((row["sweep_value"], row["protocol"]), []).append(row)
    summary = []
    for (value, protocol), members in sorted(groups.items(), key=lambda kv: (kv[0][0], kv[0][1])):
        deliveries = [float(r["delivery_pct"]) for r in members]
        delays = [float(r["avg_delay_ms"]) for r in members if r["avg_delay_ms"] != ""]
        summary.append(
            {
                "sweep_value": value,
                "protocol": protocol,
                "seeds": len(members),
                "delivery_pct": sum(deliveries) / len(deliveries),
                "avg_delay_ms": sum(delays) / len(delays) if delays else None,
            }
        )
    return summary


def print_summary(summary: list[dict], family: str) -> None:
    print(f"\nseed-averaged summary ({family} family)")
    print(f"{'value':>8} {'protocol':>14} {'delivery_pct':>13} {'avg_delay_ms':>13}")
    for entry in summary:
        delay = "-" if entry["avg_delay_ms"] is None else f"{entry['avg_delay_ms']:.3f}"
        print(
            f"{entry['sweep_value']:>8} {entry['protocol']:>14} "
            f"{entry['delivery_pct']:>13.2f} {delay:>13}"
        )


# ---------------------------------------------------------------------------
# Entry points


def _add_override_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key = value config file")
    parser.add_argument("--nodes", type=int, help="node count (even)")
    parser.add_argument("--protocol", help="rlar | dlar | secure_rlar | secure_dlar")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--duration", type=float, help="traffic duration, seconds")
    parser.add_argument("--rate", type=float, help="packets per second per flow")
    parser.add_argument("--speed", help="fixed speed or lo:hi uniform range")
    parser.add_argument("--malicious", type=int, help="number of malicious nodes")
    parser.add_argument("--tx-range", type=float)


def _collect_overrides(args: argparse.Namespace) -> dict:
    cfg = read_config(args.config) if args.config else {}
    for key, attr in [
        ("node_count", "nodes"),
        ("protocol", "protocol"),
        ("seed", "seed"),
        ("sim_duration", "duration"),
        ("send_rate", "rate"),
        ("node_speed", "speed"),
        ("malicious_count", "malicious"),
        ("tx_range", "tx_range"),
    ]:
        value = getattr(args, attr, None)
        if value is not None:
            cfg[key] = value
    return cfg


def cmd_run(args: argparse.Namespace) -> int:
    cfg = _collect_overrides(args)
    if "node_count" not in cfg:
        cfg["node_count"] = 10
    scenario = build_scenario(cfg)
    if args.trace:
        scenario = replace(scenario, trace=True)
    sim = Simulation(scenario)
    report = sim.run()
    if args.trace:
        with open(args.trace, "w") as fh:
            for rec in sim.trace:
                fh.write(json.dumps(rec, sort_keys=True) + "\n")
    print(f"protocol={scenario.protocol.value} nodes={scenario.node_count} "
          f"malicious={scenario.malicious_count} seed={scenario.seed}")
    print(f"flows:             {len(report.flows)}")
    print(f"packets sent:      {report.packets_sent}")
    print(f"packets delivered: {report.packets_delivered}")
    print(f"delivery:          {report.delivery_pct:.2f}%")
    delay = "-" if report.avg_total_delay is None else f"{report.avg_total_delay * 1000:.3f} ms"
    print(f"avg total delay:   {delay}")
    print(f"mitm detections:   {report.mitm_detections}")
    print(f"rediscoveries:     {report.route_rediscoveries}")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    protocols = [parse_protocol(p.strip()) for p in args.protocols.split(",")]
    base = read_config(args.config) if args.config else {}
    rows = run_sweep(args.family, protocols, args.seeds, args.out, base, workers=args.workers)
    print_summary(summarize(rows), args.family)
    print(f"\nwrote {len(rows)} rows to {args.out}")
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="larsim",
        description="Location-aided routing protocols (plain and secure) under simulation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a single scenario and print its report")
    _add_override_flags(p_run)
    p_run.add_argument("--trace", help="write a JSONL action trace to this path")
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="run a sweep family and write a CSV")
    p_sweep.add_argument("--family", required=True, choices=sorted(SWEEP_FAMILIES))
    p_sweep.add_argument(
        "--protocols",
        default="rlar,dlar,secure_rlar,secure_dlar",
        help="comma-separated protocol list",
    )
    p_sweep.add_argument("--seeds", type=int, default=10, help="seeds per sweep point")
    p_sweep.add_argument("--out", required=True, help="output CSV path")
    p_sweep.add_argument("--config", help="flat key = value config file with base parameters")
    p_sweep.add_argument("--workers", type=int, default=None, help="worker pool size")
    p_sweep.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
