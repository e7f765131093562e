"""Phosphorelays of growing length: the reduced network always has 2M - 1 reactions.

Run: python3 demos/phosphorelay.py
"""

from __future__ import annotations

import time

from crnreduce import analyze, parse_network, reduce_fully
from crnreduce.networks import phosphorelay

print(f"{'M':>3} {'reactions':>10} {'reduced':>8} {'class':>6} {'seconds':>8}")
for M in range(2, 11):
    t0 = time.perf_counter()
    net = parse_network(phosphorelay(M))
    reduced, _ = reduce_fully(net)
    cls = analyze(reduced).orthant_class
    print(f"{M:>3} {net.n_reactions:>10} {reduced.n_reactions:>8} {cls.value:>6} {time.perf_counter() - t0:>8.3f}")
