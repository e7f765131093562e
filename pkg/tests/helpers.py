"""Shared test utilities: independent oracles and fixtures that must not live in the library."""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Optional, Sequence

from crnreduce import Complex, ReactionNetwork, validate_network
from crnreduce.model import species_usage


def remove_self_paired_intermediate(net: ReactionNetwork, Y: str) -> ReactionNetwork:
    """Removal under the broader definition that allows ``y == y'``.

    ``Y`` must form the complex ``1*Y`` and only take part in ``y <-> Y`` (or
    in ``y -> Y`` plus ``Y -> y``); those reactions are simply deleted. The
    library refuses such species, so this lives in the tests only.
    """
    unit = Complex.of({Y: 1})
    js = species_usage(net)[Y]
    others = set()
    for j in js:
        r = net.reactions[j]
        if unit not in (r.reactant, r.product):
            raise ValueError(f"{Y} is not a standalone complex in reaction {j + 1}")
        others.add(r.product if r.reactant == unit else r.reactant)
    if len(others) != 1:
        raise ValueError(f"{Y} connects different complexes")
    keep = [r for j, r in enumerate(net.reactions) if j not in js]
    return validate_network(net.replace_reactions(keep))


def brute_force_lp(
    A: Sequence[Sequence[Fraction]], b: Sequence[Fraction], cost: Optional[Sequence[Fraction]] = None
) -> tuple[bool, Optional[Fraction]]:
    """Feasibility and best vertex value of ``{A x = b, x >= 0}`` by enumerating bases.

    Returns ``(feasible, max cost.x over basic feasible solutions)``. Only
    meaningful for bounded problems when ``cost`` is given.
    """
    from crnreduce.linalg import rank, rref

    n = len(A[0]) if A else 0
    r = rank(A, n)
    if r == 0:
        feasible = all(x == 0 for x in b)
        return feasible, (Fraction(0) if feasible else None)
    best = None
    feasible = False
    for cols in itertools.combinations(range(n), r):
        sub = [[row[c] for c in cols] + [bi] for row, bi in zip(A, b)]
        rows, pivots = rref(sub, r + 1)
        if pivots != list(range(r)):
            continue  # singular basis or inconsistent system
        x = [Fraction(0)] * n
        for row, p in zip(rows, pivots):
            x[cols[p]] = row[-1]
        if any(v < 0 for v in x):
            continue
        if any(sum(a * v for a, v in zip(row, x)) != bi for row, bi in zip(A, b)):
            continue
        feasible = True
        if cost is not None:
            val = sum(c * v for c, v in zip(cost, x))
            best = val if best is None or val > best else best
    return feasible, best


def restricted_kernel_dimension(N, support: Sequence[int], m: int) -> int:
    from crnreduce.linalg import rational_kernel_basis

    sub = [[N[i][j] for i in support] for j in range(m)]
    return len(rational_kernel_basis(sub, len(support)))


def reduce_in_random_order(net: ReactionNetwork, targets, rng):
    """Remove exactly ``targets``, picking the next one at random among those currently removable.

    Returns ``None`` if at some point no remaining target is an intermediate.
    """
    from crnreduce import reduce_by
    from crnreduce.reduction import find_intermediates

    left = set(targets)
    order = []
    current = net
    while left:
        ready = sorted(c.species for c in find_intermediates(current) if c.species in left)
        if not ready:
            return None
        Y = rng.choice(ready)
        current, _ = reduce_by(current, [Y])
        order.append(Y)
        left.discard(Y)
    return current, order


def isomorphic(a: ReactionNetwork, b: ReactionNetwork) -> bool:
    """Equality of canonical forms up to a renaming of species (brute force over the names that differ)."""
    from crnreduce import Reaction, canonical_form

    if a.n_species != b.n_species or a.n_reactions != b.n_reactions:
        return False
    only_a = sorted(set(a.species) - set(b.species))
    only_b = sorted(set(b.species) - set(a.species))
    target = canonical_form(b)

    def rename(c, mapping):
        return Complex.of({mapping.get(s, s): k for s, k in c})

    for perm in itertools.permutations(only_b):
        mapping = dict(zip(only_a, perm))
        renamed = [Reaction(rename(r.reactant, mapping), rename(r.product, mapping), r.reversible) for r in a.reactions]
        if canonical_form(ReactionNetwork.from_reactions(renamed)) == target:
            return True
    return False
