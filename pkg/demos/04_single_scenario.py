"""Run the four protocols through one 40-node scenario and compare."""

from larsim.engine import Scenario, Simulation
from larsim.routing import Protocol

print(f"{'protocol':>14} {'delivery':>9} {'avg delay':>10} {'mitm':>5} {'redisc':>7}")
for protocol in Protocol:
    scenario = Scenario(
        node_count=40,
        protocol=protocol,
        seed=1,
        malicious_count=4,
        node_speed=5.0,
    )
    report = Simulation(scenario).run()
    delay = "-" if report.avg_total_delay is None else f"{report.avg_total_delay * 1000:.2f} ms"
    print(
        f"{protocol.value:>14} {report.delivery_pct:8.1f}% {delay:>10} "
        f"{report.mitm_detections:5d} {report.route_rediscoveries:7d}"
    )
