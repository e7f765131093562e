"""RKIP pathway: remove the three intermediates by hand and compare both networks.

Run: python3 demos/rkip.py
"""

from __future__ import annotations

from pathlib import Path

from crnreduce import build_r_graph, read_network, reduce_by, serialize_network, stoichiometric_matrix, verify_invariance

HERE = Path(__file__).parent

net = read_network(HERE / "networks" / "rkip.crn")
reduced, trace = reduce_by(net, ["M_pE", "RKE_p", "K_pP"])
for step in trace.steps:
    print(f"remove {step.removed:6} -> {step.contracted}   (cancelled: {', '.join(step.cancelled) or '-'})")
print()
print(serialize_network(reduced))
print()

rg = build_r_graph(reduced, stoichiometric_matrix(reduced))
for (j, k), labels in sorted(rg.edges.items()):
    signs = ",".join("+" if s > 0 else "-" for s in sorted(labels, reverse=True))
    print(f"R{j + 1} -- R{k + 1}  [{signs}]")
print()
print(verify_invariance(net).format_text())
