"""Removal of intermediates.

A species ``Y`` is an intermediate when it forms the complex ``1*Y`` on its
own, appears in no other complex, and is produced by exactly one reaction
``y -- Y`` and consumed by exactly one reaction ``Y -- y'`` with ``y != y'``,
where every species shared by ``y`` and ``y'`` has the same coefficient on
both sides. Removing ``Y`` collapses the two reactions into ``y - e -- y' - e``
(``e`` being the shared part), which drops the cancelled catalysts.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import StaleCandidate
from .model import Complex, Reaction, ReactionNetwork, species_usage


@dataclass(frozen=True)
class IntermediateCandidate:
    species: str
    producing: int
    consuming: int
    y: Complex
    y_prime: Complex
    e: Complex
    y_hat: Complex
    y_hat_prime: Complex
    producing_reaction: Reaction
    consuming_reaction: Reaction

    @property
    def contracted(self) -> Reaction:
        reversible = self.producing_reaction.reversible and self.consuming_reaction.reversible
        return Reaction(self.y_hat, self.y_hat_prime, reversible)

    @property
    def producing_flipped(self) -> bool:
        """True when the producing reaction is stored as ``Y <-> y``."""
        return self.producing_reaction.product != Complex.of({self.species: 1})

    @property
    def consuming_flipped(self) -> bool:
        return self.consuming_reaction.reactant != Complex.of({self.species: 1})


@dataclass(frozen=True)
class ReductionStep:
    removed: str
    contracted: Reaction
    cancelled: tuple[str, ...]
    producing: int
    consuming: int
    index_map: dict[int, int]  # old reaction index -> new index; both merged reactions map to the contracted one

    def to_dict(self) -> dict:
        return {
            "removed": self.removed,
            "cancelled_catalysts": list(self.cancelled),
            "contracted": str(self.contracted),
            "producing_reaction": self.producing + 1,
            "consuming_reaction": self.consuming + 1,
            "index_map": {str(k + 1): v + 1 for k, v in sorted(self.index_map.items())},
        }


@dataclass(frozen=True)
class ReductionTrace:
    initial: ReactionNetwork
    final: ReactionNetwork
    steps: tuple[ReductionStep, ...] = field(default_factory=tuple)

    @property
    def removed(self) -> list[str]:
        return [s.removed for s in self.steps]

    def replay(self) -> ReactionNetwork:
        """Re-run the recorded removals on ``initial``; the result equals ``final``."""
        net = self.initial
        for step in self.steps:
            cand = intermediate_candidate(net, step.removed)
            if cand is None or cand.contracted != step.contracted:
                raise StaleCandidate(f"step removing {step.removed} does not apply")
            net, _ = remove_intermediate(net, cand)
        return net

    def to_dict(self) -> dict:
        return {
            "initial": str(self.initial),
            "final": str(self.final),
            "steps": [s.to_dict() for s in self.steps],
        }


def _roles(net: ReactionNetwork, Y: str, js: Sequence[int]) -> Optional[tuple[int, int, Complex, Complex]]:
    """Assign producing/consuming roles to the two reactions through ``Y``.

    Returns ``(producing, consuming, y, y')`` or None when ``Y`` violates the
    standalone-complex condition or no orientation fits. A reversible
    reaction may be read in either direction; the earlier reaction is tried
    as the producing one first.
    """
    unit = Complex.of({Y: 1})
    sides = {}
    for j in js:
        r = net.reactions[j]
        if r.product == unit and Y not in r.reactant.support:
            sides[j] = ("product", r.reactant)
        elif r.reactant == unit and Y not in r.product.support:
            sides[j] = ("reactant", r.product)
        else:
            return None
    for prod, cons in ((js[0], js[1]), (js[1], js[0])):
        rp, rc = net.reactions[prod], net.reactions[cons]
        if (sides[prod][0] == "product" or rp.reversible) and (sides[cons][0] == "reactant" or rc.reversible):
            return prod, cons, sides[prod][1], sides[cons][1]
    return None


def intermediate_candidate(
    net: ReactionNetwork, Y: str, usage: Optional[dict[str, list[int]]] = None
) -> Optional[IntermediateCandidate]:
    """The candidate for species ``Y``, or None if ``Y`` is not an intermediate of ``net``.

    ``usage`` may pass a precomputed :func:`~crnreduce.model.species_usage` table.
    """
    js = (usage if usage is not None else species_usage(net)).get(Y, [])
    if len(js) != 2:
        return None
    roles = _roles(net, Y, js)
    if roles is None:
        return None
    prod, cons, y, y_prime = roles
    if y == y_prime:
        return None
    shared = y.support & y_prime.support
    if any(y.coefficient(s) != y_prime.coefficient(s) for s in shared):
        return None
    e = y.restrict(shared)
    y_hat, y_hat_prime = y - e, y_prime - e
    if y_hat.is_zero() or y_hat_prime.is_zero():
        return None
    return IntermediateCandidate(
        Y, prod, cons, y, y_prime, e, y_hat, y_hat_prime,
        net.reactions[prod], net.reactions[cons],
    )


def find_intermediates(net: ReactionNetwork) -> list[IntermediateCandidate]:
    """All intermediates of ``net`` in species order.

    Species taking part in more than two reactions are never candidates.
    """
    out = []
    usage = species_usage(net)
    for Y in net.species:
        cand = intermediate_candidate(net, Y, usage)
        if cand is not None:
            out.append(cand)
    return out


def remove_intermediate(net: ReactionNetwork, cand: IntermediateCandidate) -> tuple[ReactionNetwork, ReductionStep]:
    """Collapse the two reactions through ``cand.species`` into one and cancel catalysts.

    The contracted reaction takes the producing reaction's slot; it is
    reversible only if both original reactions were. Catalyst species that
    no longer take part in any reaction are dropped from the network.
    """
    m = net.n_reactions
    if (
        cand.species not in net.species
        or max(cand.producing, cand.consuming) >= m
        or net.reactions[cand.producing] != cand.producing_reaction
        or net.reactions[cand.consuming] != cand.consuming_reaction
    ):
        raise StaleCandidate(f"candidate for {cand.species} does not match the network")

    contracted = cand.contracted
    new_reactions = []
    index_map = {}
    for j, r in enumerate(net.reactions):
        if j == cand.consuming:
            continue
        index_map[j] = len(new_reactions)
        new_reactions.append(contracted if j == cand.producing else r)
    index_map[cand.consuming] = index_map[cand.producing]

    reduced = net.replace_reactions(new_reactions)
    remaining = set(reduced.species)
    cancelled = tuple(s for s in net.species if s in cand.e.support and s not in remaining)
    step = ReductionStep(cand.species, contracted, cancelled, cand.producing, cand.consuming, index_map)
    return reduced, step


def reduce_fully(net: ReactionNetwork, rng: Optional[random.Random] = None) -> tuple[ReactionNetwork, ReductionTrace]:
    """Remove intermediates until none is left.

    By default the intermediate with the lowest species index goes first;
    with ``rng`` the next intermediate is drawn at random. For a fixed set
    of removed species the result does not depend on the order. Different
    choices can remove different sets, though: in a cycle of single-species
    complexes such as ``A <-> B, B <-> C, C <-> A`` any member may go, and
    the two survivors depend on the picks. The minimal networks then agree
    only up to renaming those species.
    """
    current = net
    steps = []
    while True:
        candidates = find_intermediates(current)
        if not candidates:
            break
        cand = rng.choice(candidates) if rng is not None else candidates[0]
        current, step = remove_intermediate(current, cand)
        steps.append(step)
    return current, ReductionTrace(net, current, tuple(steps))


def reduce_by(net: ReactionNetwork, order: Iterable[str]) -> tuple[ReactionNetwork, ReductionTrace]:
    """Successively remove the given intermediates, in the given order.

    Raises:
        ValueError: some species is not an intermediate when its turn comes.
    """
    current = net
    steps = []
    for Y in order:
        cand = intermediate_candidate(current, Y)
        if cand is None:
            raise ValueError(f"{Y} is not an intermediate of the current network")
        current, step = remove_intermediate(current, cand)
        steps.append(step)
    return current, ReductionTrace(net, current, tuple(steps))


def removal_layout(net: ReactionNetwork, cand: IntermediateCandidate) -> tuple[ReactionNetwork, ReactionNetwork]:
    """Reorder ``net`` and its one-step reduction so the merged reactions come last.

    In the first network the reactions not through ``Y`` keep their order and
    are followed by ``y -- Y`` and ``Y -- y'`` (reversible ones re-oriented
    that way round); in the second they are followed by the contracted
    reaction. With this layout the kernels satisfy
    ``ker N = {(v, v_last) : v in ker N*}`` and the sign patterns satisfy
    ``sigma = (sigma*, sigma*_last)``.
    """
    others = [r for j, r in enumerate(net.reactions) if j not in (cand.producing, cand.consuming)]
    rp, rc = cand.producing_reaction, cand.consuming_reaction
    if cand.producing_flipped:
        rp = rp.flipped()
    if cand.consuming_flipped:
        rc = rc.flipped()
    full = ReactionNetwork(net.species, tuple(others + [rp, rc]))
    reduced = net.replace_reactions(others + [cand.contracted])
    return full, reduced
