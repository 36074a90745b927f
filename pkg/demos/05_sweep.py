"""A miniature malicious-count sweep, written to CSV and summarized.

The full experiment families run through the command line
(``larsim sweep --family ...``); this is the same machinery scaled down to
a couple of seeds for a quick look.
"""

from larsim.cli import print_summary, run_sweep, summarize
from larsim.routing import Protocol

rows = run_sweep(
    "malicious",
    [Protocol.DLAR, Protocol.SECURE_DLAR],
    seeds=2,
    out_path="demo_sweep.csv",
    base={"sim_duration": "3.0"},
    workers=1,
)
print_summary(summarize(rows), "malicious")
print("\nrows written to demo_sweep.csv")
