"""Seeded random networks for property tests and the self-test command.

The base network never puts a species on both sides of a reaction and never
lets a species take part in more than two reactions. Most species are
"flow" species, produced by one reaction and consumed by another along a
random cycle of reactions, which makes the all-ones flux a kernel vector
and lets a positive conservation law exist. A minority are shared on the
same side of two reactions, used once, or carry mismatched coefficients,
so that every hypothesis and graph property fails now and then.

Intermediates are injected afterwards by inflating a reaction ``y -- y'``
into ``y (+ E) -- Y -- y' (+ E)`` with a fresh species ``Y`` and optionally
a fresh catalyst ``E``.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Optional

from .errors import GenerationFailed
from .graphs import build_sr_graph, graph_connected
from .linalg import check_conservative, check_consistent
from .model import (
    Complex,
    Reaction,
    ReactionNetwork,
    check_structural_hypotheses,
    stoichiometric_matrix,
    validate_network,
)
from .reduction import find_intermediates

REQUIREMENTS = frozenset({"G1", "G2", "G3", "G4", "sr_connected", "irreversible", "intermediate"})


def inflate_reaction(
    net: ReactionNetwork,
    j: int,
    intermediate: str,
    catalyst: Optional[str] = None,
    producing_reversible: Optional[bool] = None,
    consuming_reversible: Optional[bool] = None,
) -> ReactionNetwork:
    """Replace reaction ``j`` (``y -- y'``) by ``y + E -- Y`` followed by ``Y -- y' + E``.

    The producing reaction takes slot ``j`` and the consuming one is placed
    right after it, so removing ``Y`` again restores the original network.
    A reversible reaction yields two reversible ones. For an irreversible
    reaction the caller may make one side reversible, but not both; by
    default the binding step is reversible and the release step is not.

    Raises:
        ValueError: a side of reaction ``j`` is empty, a name is taken, or
            the reversibility choice would make the contracted reaction
            reversible when the original was not.
    """
    r = net.reactions[j]
    if r.reactant.is_zero() or r.product.is_zero():
        raise ValueError("both sides of an inflated reaction must be nonempty")
    for name in (intermediate, catalyst):
        if name is not None and name in net.species:
            raise ValueError(f"species name {name!r} already in use")
    if r.reversible:
        prev = crev = True
    else:
        prev = True if producing_reversible is None else producing_reversible
        crev = False if consuming_reversible is None else consuming_reversible
        if prev and crev:
            raise ValueError("an irreversible reaction needs an irreversible step")
    e = Complex.of({catalyst: 1}) if catalyst else Complex.zero()
    unit = Complex.of({intermediate: 1})
    producing = Reaction(r.reactant + e, unit, prev)
    consuming = Reaction(unit, r.product + e, crev)
    reactions = list(net.reactions)
    reactions[j : j + 1] = [producing, consuming]
    return ReactionNetwork.from_reactions(reactions, net.species)


def _coefficient(rng: random.Random) -> Fraction:
    return Fraction(rng.choice((1, 1, 1, 1, 2)))


def _base_network(rng: random.Random, n_max: int, m_max: int) -> ReactionNetwork:
    m = rng.randint(1, max(1, min(m_max, n_max)))
    reactant: list[dict[str, Fraction]] = [{} for _ in range(m)]
    product: list[dict[str, Fraction]] = [{} for _ in range(m)]
    names = [f"S{k}" for k in range(1, n_max + 1)]
    rng.shuffle(names)

    def flow(a: int, b: int) -> None:
        name = names.pop()
        k = _coefficient(rng)
        product[a][name] = k
        reactant[b][name] = k if rng.random() < 0.9 else _coefficient(rng)

    order = list(range(m))
    rng.shuffle(order)
    groups = [order]
    if m >= 4 and rng.random() < 0.2:
        cut = rng.randint(2, m - 2)
        groups = [order[:cut], order[cut:]]

    # one flow species per cycle edge, while the budget lasts
    for g in groups:
        if len(g) >= 2:
            for t in range(len(g)):
                if names:
                    flow(g[t], g[(t + 1) % len(g)])

    for _ in range(rng.randint(0, len(names))):
        g = rng.choice(groups)
        mode = rng.random()
        if len(g) >= 2 and mode < 0.55:
            flow(*rng.sample(g, 2))
        elif len(g) >= 2 and mode < 0.85:
            a, b = rng.sample(g, 2)
            side = rng.choice((reactant, product))
            name = names.pop()
            side[a][name] = _coefficient(rng)
            side[b][name] = _coefficient(rng)
        else:
            rng.choice((reactant, product))[rng.choice(g)][names.pop()] = _coefficient(rng)

    reactions = []
    for j in range(m):
        if not reactant[j] and not product[j]:
            if not names:
                raise GenerationFailed("species budget exhausted")
            rng.choice((reactant, product))[j][names.pop()] = Fraction(1)
        reactions.append(Reaction(Complex.of(reactant[j]), Complex.of(product[j]), rng.random() < 0.5))
    return validate_network(ReactionNetwork.from_reactions(reactions))


def _meets(net: ReactionNetwork, require: frozenset[str]) -> bool:
    if not require:
        return True
    g1, g2 = check_structural_hypotheses(net)
    if not (g1.holds and g2.holds):  # pragma: no cover - guaranteed by construction
        return False
    if "irreversible" in require and not net.irreversible_indices:
        return False
    N = stoichiometric_matrix(net)
    if "sr_connected" in require:
        if not graph_connected(build_sr_graph(net, N)):
            return False
    if "intermediate" in require:
        if not find_intermediates(net):
            return False
    if "G3" in require and not check_conservative(N, net.n_reactions).holds:
        return False
    if "G4" in require and not check_consistent(N, net.irreversible_indices, net.n_reactions).holds:
        return False
    return True


def random_network(
    n_max: int,
    m_max: int,
    with_intermediates: int = 0,
    seed: Optional[int] = None,
    require: Iterable[str] = (),
    max_tries: int = 500,
    rng: Optional[random.Random] = None,
) -> ReactionNetwork:
    """Draw a random validated network with at most ``n_max`` species and ``m_max`` reactions.

    Args:
        n_max: species bound, intermediates and catalysts included.
        m_max: reaction bound, including the extra reaction per intermediate.
        with_intermediates: number of reactions to inflate through a fresh
            intermediate; the result then has work for the reduction.
        seed: makes the draw reproducible. Ignored when ``rng`` is given.
        require: properties the sample must have, drawn from ``"G3"``,
            ``"G4"``, ``"sr_connected"``, ``"irreversible"`` and
            ``"intermediate"`` (``"G1"``/``"G2"`` always hold). Samples
            failing them are redrawn.
        max_tries: number of draws before giving up.
        rng: random source to draw from instead of a fresh seeded one.

    Raises:
        ValueError: bounds too small for the requested intermediates.
        GenerationFailed: no sample met ``require`` within ``max_tries``.
    """
    require = frozenset(require)
    unknown = require - REQUIREMENTS
    if unknown:
        raise ValueError(f"unknown requirements: {sorted(unknown)}")
    k = with_intermediates
    if n_max < 2 + k or m_max < 1 + k:
        raise ValueError("bounds too small for the requested number of intermediates")
    rng = rng if rng is not None else random.Random(seed)

    for _ in range(max_tries):
        catalysts = [rng.random() < 0.5 for _ in range(k)]
        while sum(catalysts) > n_max - k - 2:
            catalysts[catalysts.index(True)] = False
        base_n = n_max - k - sum(catalysts)
        try:
            net = _base_network(rng, base_n, m_max - k)
        except GenerationFailed:
            continue
        ok = True
        for t in range(k):
            eligible = [j for j, r in enumerate(net.reactions) if not r.reactant.is_zero() and not r.product.is_zero()]
            if not eligible:
                ok = False
                break
            j = rng.choice(eligible)
            catalyst = f"E{t + 1}" if catalysts[t] else None
            choice = rng.choice(((True, False), (False, True), (False, False)))
            net = inflate_reaction(net, j, f"Y{t + 1}", catalyst, *choice)
        if ok and _meets(net, require):
            return net
    raise GenerationFailed(f"no network met {sorted(require)} within {max_tries} tries")
