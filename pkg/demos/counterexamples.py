"""Where removal goes wrong: self-paired species and cycles of intermediates.

Run: python3 demos/counterexamples.py
"""

from __future__ import annotations

from pathlib import Path

from crnreduce import (
    analyze,
    find_intermediates,
    networks_equal,
    parse_network,
    read_network,
    reduce_by,
    serialize_network,
)

HERE = Path(__file__).parent / "networks"

# Y is attached to the single complex A + B, so it is not an intermediate.
pair = read_network(HERE / "self_loop_pair.crn")
print("A + B <-> Y, A <-> B")
print("  intermediates:", [c.species for c in find_intermediates(pair)])
report = analyze(pair)
w = report.plp.sr_witness
print("  positive loop property:", report.plp.holds)
print("  witness:", w.describe(pair.species, pair.reaction_names()))
# deleting Y anyway leaves A <-> B, whose R-graph has the property: the verdict would flip
print("  after deleting Y anyway:", analyze(parse_network("A <-> B")).plp.holds)
print()

# Every species of this cycle is an intermediate; the survivors depend on what goes first.
cycle = read_network(HERE / "intermediate_cycle.crn")
print("A -> B, B -> C, C <-> A")
for first in ("A", "B", "C"):
    reduced, _ = reduce_by(cycle, [first])
    print(f"  remove {first}: {serialize_network(reduced).replace(chr(10), ', ')}")
a, _ = reduce_by(cycle, ["A"])
b, _ = reduce_by(cycle, ["B"])
print("  same minimal network:", networks_equal(a, b))
