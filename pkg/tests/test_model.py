"""Network model: validation, stoichiometry, structural hypotheses and canonical forms."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crnreduce import (
    Complex,
    EmptyNetwork,
    ReactantEqualsProduct,
    Reaction,
    ReactionNetwork,
    ValidationError,
    canonical_form,
    check_structural_hypotheses,
    networks_equal,
    parse_network,
    random_network,
    reduce_by,
    stoichiometric_matrix,
    validate_network,
)
from crnreduce.networks import ONE_SITE, RKIP, RKIP_REDUCED

F = Fraction


def rxn(lhs: dict, rhs: dict, rev: bool = False) -> Reaction:
    return Reaction(Complex.of(lhs), Complex.of(rhs), rev)


# -- Complex -----------------------------------------------------------------

def test_complex_merges_repeats_and_drops_zeros():
    c = Complex((("A", F(1)), ("B", F(0)), ("A", F(1, 2))))
    assert c.as_dict() == {"A": F(3, 2)}
    assert c.support == frozenset({"A"})
    assert str(c) == "3/2 A"


def test_complex_equality_is_vector_equality():
    assert Complex.of(A=1, B=2) == Complex.of(B=2, A=1)
    assert hash(Complex.of(A=1, B=2)) == hash(Complex.of(B=2, A=1))
    assert Complex.of(A=1) != Complex.of(A=2)
    assert Complex.zero().is_zero() and str(Complex.zero()) == "0"


def test_complex_arithmetic():
    y = Complex.of(S0=1, E=1)
    e = Complex.of(E=1)
    assert y - e == Complex.of(S0=1)
    assert (y - e) + e == y
    with pytest.raises(ValidationError):
        e - y


def test_complex_rejects_floats_and_negatives():
    with pytest.raises(TypeError):
        Complex.of(A=0.5)
    with pytest.raises(ValidationError):
        Complex.of(A=-1)


# -- validation --------------------------------------------------------------

def test_one_site_accepted_unchanged():
    net = parse_network(ONE_SITE)
    assert validate_network(net) is net
    assert net.species == ("S0", "E", "S0E", "S1", "F", "S1F")
    assert net.n_reactions == 4


def test_reactant_equals_product_rejected():
    raw = ReactionNetwork.from_reactions([rxn({"A": 1}, {"A": 1})])
    with pytest.raises(ReactantEqualsProduct) as info:
        validate_network(raw)
    assert info.value.index == 0


def test_unused_species_pruned():
    raw = ReactionNetwork(("A", "Z", "B"), (rxn({"A": 1}, {"B": 1}),))
    net = validate_network(raw)
    assert net.species == ("A", "B")


def test_empty_network_rejected():
    with pytest.raises(EmptyNetwork):
        validate_network(ReactionNetwork((), ()))


@pytest.mark.parametrize(
    "species",
    [("A", "A", "B"), ("A", "1B")],
)
def test_bad_species_lists_rejected(species):
    raw = ReactionNetwork(species, (rxn({"A": 1}, {"B": 1}),))
    with pytest.raises(ValidationError):
        validate_network(raw)


def test_undeclared_species_rejected():
    raw = ReactionNetwork(("A",), (rxn({"A": 1}, {"B": 1}),))
    with pytest.raises(ValidationError, match="undeclared"):
        validate_network(raw)


def test_duplicate_reactions_are_kept():
    net = parse_network("A -> B\nA -> B")
    assert net.n_reactions == 2


# -- stoichiometric matrix ---------------------------------------------------

def test_one_site_stoichiometric_matrix():
    N = stoichiometric_matrix(parse_network(ONE_SITE))
    cols = [N.column(j) for j in range(4)]
    assert cols == [
        (-1, -1, 1, 0, 0, 0),
        (0, 1, -1, 1, 0, 0),
        (0, 0, 0, -1, -1, 1),
        (1, 0, 0, 0, 1, -1),
    ]
    assert N.shape == (6, 4)


def test_coefficient_two_column():
    N = stoichiometric_matrix(parse_network("2A -> B"))
    assert N.column(0) == (-2, 1)


def test_reduced_one_site_matrix():
    N = stoichiometric_matrix(parse_network("S0 -> S1\nS1 -> S0"))
    assert [list(r) for r in N] == [[-1, 1], [1, -1]]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_stoichiometric_column_is_product_minus_reactant(seed):
    net = random_network(10, 6, seed=seed)
    N = stoichiometric_matrix(net)
    for j, r in enumerate(net.reactions):
        diff = r.product.as_dict()
        for s, k in r.reactant:
            diff[s] = diff.get(s, F(0)) - k
        assert {net.species[i]: x for i, x in enumerate(N.column(j)) if x} == {
            s: k for s, k in diff.items() if k
        }


# -- structural hypotheses ---------------------------------------------------

def test_one_site_structural_hypotheses_hold():
    g1, g2 = check_structural_hypotheses(parse_network(ONE_SITE))
    assert g1.holds and g2.holds


def test_autocatalysis_witness():
    g1, _ = check_structural_hypotheses(parse_network("A + B -> A + C"))
    assert not g1.holds and g1.witnesses == [("A", 0)]


def test_three_reactions_witness():
    _, g2 = check_structural_hypotheses(parse_network("A -> B\nA -> C\nA -> D"))
    assert not g2.holds and g2.witnesses == ["A"]


def test_duplicate_reactions_count_towards_bound():
    _, g2 = check_structural_hypotheses(parse_network("A -> B\nA -> B\nA -> C"))
    assert g2.witnesses == ["A"]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.booleans())
def test_g1_witnesses_match_disjoint_supports(seed, add_autocatalysis):
    net = random_network(8, 5, seed=seed)
    if add_autocatalysis:
        r = net.reactions[0]
        s = net.species[0]
        bumped = Reaction(r.reactant + Complex.of({s: 1}), r.product + Complex.of({s: 1}), r.reversible)
        net = validate_network(net.replace_reactions((bumped,) + net.reactions[1:]))
    g1, _ = check_structural_hypotheses(net)
    flagged = {j for _, j in g1.witnesses}
    for j, r in enumerate(net.reactions):
        assert (not (r.reactant.support & r.product.support)) == (j not in flagged)


# -- canonical forms ---------------------------------------------------------

def test_canonical_form_ignores_reaction_order():
    a = parse_network("S1 -> S0\nS0 -> S1")
    b = parse_network("S0 -> S1\nS1 -> S0")
    assert canonical_form(a) == canonical_form(b)


def test_canonical_form_keeps_multiplicity():
    assert canonical_form(parse_network("A -> B\nA -> B")) != canonical_form(parse_network("A -> B"))


def test_canonical_form_ignores_reversible_orientation_and_labels():
    assert networks_equal(parse_network("r: A <-> B + C"), parse_network("C + B <-> A"))
    assert not networks_equal(parse_network("A -> B"), parse_network("B -> A"))


def test_one_site_reduction_independent_of_order():
    net = parse_network(ONE_SITE)
    a, _ = reduce_by(net, ["S0E", "S1F"])
    b, _ = reduce_by(net, ["S1F", "S0E"])
    assert canonical_form(a) == canonical_form(b)


def test_networks_equal_examples():
    one = parse_network("S0 -> S1\nS1 -> S0")
    assert networks_equal(one, one)
    assert not networks_equal(one, parse_network("S0 <-> S1"))
    reduced, _ = reduce_by(parse_network(RKIP), ["M_pE", "RKE_p", "K_pP"])
    assert networks_equal(reduced, parse_network(RKIP_REDUCED))


def _shuffled(net: ReactionNetwork, rng: random.Random) -> ReactionNetwork:
    species = list(net.species)
    reactions = list(net.reactions)
    rng.shuffle(species)
    rng.shuffle(reactions)
    reactions = [r.flipped() if r.reversible and rng.random() < 0.5 else r for r in reactions]
    return ReactionNetwork(tuple(species), tuple(reactions))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 10_000))
def test_canonical_form_permutation_invariant_and_idempotent(seed, shuffle_seed):
    net = random_network(10, 6, seed=seed)
    other = _shuffled(net, random.Random(shuffle_seed))
    cf = canonical_form(net)
    assert canonical_form(other) == cf
    rebuilt = parse_network("\n".join(cf.reactions))
    assert canonical_form(rebuilt) == cf


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 10_000), st.integers(0, 10_000))
def test_networks_equal_is_an_equivalence(s1, s2, s3):
    nets = [random_network(6, 4, seed=s % 40) for s in (s1, s2, s3)]
    a, b, c = nets
    assert networks_equal(a, a)
    assert networks_equal(a, b) == networks_equal(b, a)
    if networks_equal(a, b) and networks_equal(b, c):
        assert networks_equal(a, c)
