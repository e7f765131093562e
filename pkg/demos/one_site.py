"""One-site phosphorylation: check the original network, reduce it, and check again.

Run: python3 demos/one_site.py
"""

from __future__ import annotations

from pathlib import Path

from crnreduce import analyze, read_network, reduce_fully, serialize_network

HERE = Path(__file__).parent

net = read_network(HERE / "networks" / "one_site.crn")
print("original network")
print(serialize_network(net))
print()
# bounded-persistence is not decided by the library; we assert it here
print(analyze(net, assume_bounded_persistence=True).format_text())

reduced, trace = reduce_fully(net)
print()
for step in trace.steps:
    print(f"removed {step.removed}, cancelled {', '.join(step.cancelled) or 'nothing'}: {step.contracted}")
print()
print("reduced network")
print(serialize_network(reduced))
print()
# two irreversible reactions, so the kernel vector (1, 1) sits inside the orthant
print(analyze(reduced, assume_bounded_persistence=True).format_text())
