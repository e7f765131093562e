"""Core reaction network data model.

Networks are immutable values. A :class:`Complex` is a sparse nonnegative
rational combination of species, a :class:`Reaction` joins two complexes and
is either irreversible or reversible, and a :class:`ReactionNetwork` is an
ordered species list together with an ordered *multiset* of reactions
(duplicate reactions are kept, never merged).
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import EmptyNetwork, ReactantEqualsProduct, ValidationError

Number = Union[int, Fraction, str]

IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def as_fraction(value: Number) -> Fraction:
    if isinstance(value, float):
        raise TypeError("floating-point coefficients are not exact; use int, Fraction or 'p/q'")
    return Fraction(value)


def format_fraction(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True, eq=False)
class Complex:
    """Formal combination ``a1 S1 + ... + ak Sk`` with strictly positive coefficients.

    Terms keep their insertion order for display; equality and hashing treat
    the complex as a vector, so ``A + B == B + A``. The empty complex is the
    zero complex.
    """

    terms: tuple[tuple[str, Fraction], ...] = ()

    def __post_init__(self) -> None:
        merged: dict[str, Fraction] = {}
        for name, coeff in self.terms:
            merged[name] = merged.get(name, Fraction(0)) + as_fraction(coeff)
        for name, coeff in merged.items():
            if coeff < 0:
                raise ValidationError(f"negative coefficient {coeff} for species {name!r}")
        object.__setattr__(self, "terms", tuple((s, c) for s, c in merged.items() if c != 0))

    @classmethod
    def of(cls, mapping: Mapping[str, Number] | None = None, /, **kwargs: Number) -> "Complex":
        items = list((mapping or {}).items()) + list(kwargs.items())
        return cls(tuple((name, as_fraction(c)) for name, c in items))

    @classmethod
    def zero(cls) -> "Complex":
        return cls(())

    def as_dict(self) -> dict[str, Fraction]:
        return dict(self.terms)

    @property
    def support(self) -> frozenset[str]:
        return frozenset(name for name, _ in self.terms)

    def coefficient(self, name: str) -> Fraction:
        for species, coeff in self.terms:
            if species == name:
                return coeff
        return Fraction(0)

    def is_zero(self) -> bool:
        return not self.terms

    def restrict(self, names: Iterable[str]) -> "Complex":
        keep = set(names)
        return Complex(tuple((s, c) for s, c in self.terms if s in keep))

    def __add__(self, other: "Complex") -> "Complex":
        return Complex(self.terms + other.terms)

    def __sub__(self, other: "Complex") -> "Complex":
        """Linear subtraction; the result must stay nonnegative."""
        return Complex(self.terms + tuple((s, -c) for s, c in other.terms))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Complex):
            return NotImplemented
        return self.as_dict() == other.as_dict()

    def __hash__(self) -> int:
        return hash(frozenset(self.terms))

    def __iter__(self) -> Iterator[tuple[str, Fraction]]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for name, coeff in self.terms:
            parts.append(name if coeff == 1 else f"{format_fraction(coeff)} {name}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Complex({str(self)!r})"


@dataclass(frozen=True)
class Reaction:
    reactant: Complex
    product: Complex
    reversible: bool = False
    label: str | None = None

    @property
    def arrow(self) -> str:
        return "<->" if self.reversible else "->"

    def species(self) -> list[str]:
        """Species of the reaction, reactant side first, without repeats."""
        seen = dict.fromkeys(name for name, _ in self.reactant.terms)
        seen.update(dict.fromkeys(name for name, _ in self.product.terms))
        return list(seen)

    def flipped(self) -> "Reaction":
        """The same reversible reaction written in the opposite direction."""
        if not self.reversible:
            raise ValueError("only reversible reactions can be flipped")
        return Reaction(self.product, self.reactant, True, self.label)

    def relabel(self, label: str | None) -> "Reaction":
        return Reaction(self.reactant, self.product, self.reversible, label)

    def __str__(self) -> str:
        body = f"{self.reactant} {self.arrow} {self.product}"
        return f"{self.label}: {body}" if self.label else body


@dataclass(frozen=True)
class ReactionNetwork:
    """Ordered species plus an ordered multiset of reactions.

    Build networks with :meth:`from_reactions` (or the parser) and pass them
    through :func:`validate_network` before analysis.
    """

    species: tuple[str, ...]
    reactions: tuple[Reaction, ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "species", tuple(self.species))
        object.__setattr__(self, "reactions", tuple(self.reactions))
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.species)})

    @classmethod
    def from_reactions(
        cls, reactions: Iterable[Reaction], species: Sequence[str] | None = None
    ) -> "ReactionNetwork":
        reactions = tuple(reactions)
        order = dict.fromkeys(species or ())
        for reaction in reactions:
            order.update(dict.fromkeys(reaction.species()))
        return cls(tuple(order), reactions)

    @property
    def n_species(self) -> int:
        return len(self.species)

    @property
    def n_reactions(self) -> int:
        return len(self.reactions)

    def index(self, species: str) -> int:
        return self._index[species]

    def reaction_names(self) -> list[str]:
        """Display names: the label when present, else ``R<j+1>``."""
        return [r.label or f"R{j + 1}" for j, r in enumerate(self.reactions)]

    @property
    def irreversible_indices(self) -> frozenset[int]:
        return frozenset(j for j, r in enumerate(self.reactions) if not r.reversible)

    def replace_reactions(self, reactions: Iterable[Reaction]) -> "ReactionNetwork":
        """New network over ``reactions``, keeping the current species order and pruning unused species."""
        reactions = tuple(reactions)
        used = {s for r in reactions for s in r.species()}
        order = [s for s in self.species if s in used]
        order += [s for r in reactions for s in r.species() if s not in self._index]
        return ReactionNetwork(tuple(dict.fromkeys(order)), reactions)

    def __str__(self) -> str:
        return "\n".join(str(r) for r in self.reactions)


@dataclass(frozen=True)
class StoichMatrix:
    """Exact ``n x m`` stoichiometric matrix; iterating yields its rows."""

    entries: tuple[tuple[Fraction, ...], ...]
    species: tuple[str, ...]
    reactions: tuple[str, ...]

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.species), len(self.reactions))

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.entries)

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i]

    def transpose(self) -> list[list[Fraction]]:
        n, m = self.shape
        return [[self.entries[i][j] for i in range(n)] for j in range(m)]

    def __getitem__(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[Fraction, ...]]:
        return iter(self.entries)


@dataclass
class HypothesisResult:
    """Outcome of a structural hypothesis check.

    ``witnesses`` lists violations when ``holds`` is false. For the linear
    hypotheses (conservation, consistency) ``certificate`` carries a vector
    that proves the hypothesis when it holds.
    """

    holds: bool
    witnesses: list = field(default_factory=list)
    certificate: tuple[Fraction, ...] | None = None

    def __bool__(self) -> bool:
        return self.holds


def validate_network(raw: ReactionNetwork) -> ReactionNetwork:
    """Return ``raw`` with unused species pruned, after checking the formalism's requirements.

    Raises:
        EmptyNetwork: there are no reactions.
        ReactantEqualsProduct: some reaction has ``y == y'``.
        ValidationError: malformed or duplicated species names, or species
            used in a reaction but missing from the species list.
    """
    if not raw.reactions:
        raise EmptyNetwork()
    if len(set(raw.species)) != len(raw.species):
        dupes = [s for s, k in Counter(raw.species).items() if k > 1]
        raise ValidationError(f"duplicate species names: {dupes}")
    for name in raw.species:
        if not IDENTIFIER.match(name):
            raise ValidationError(f"invalid species name {name!r}")
    declared = set(raw.species)
    used: set[str] = set()
    for j, reaction in enumerate(raw.reactions):
        if reaction.reactant == reaction.product:
            raise ReactantEqualsProduct(j, reaction)
        for name in reaction.species():
            if name not in declared:
                raise ValidationError(f"reaction {j + 1} uses undeclared species {name!r}")
            used.add(name)
    species = tuple(s for s in raw.species if s in used)
    if species == raw.species:
        return raw
    return ReactionNetwork(species, raw.reactions)


def stoichiometric_matrix(net: ReactionNetwork) -> StoichMatrix:
    n, m = net.n_species, net.n_reactions
    rows = [[Fraction(0)] * m for _ in range(n)]
    for j, reaction in enumerate(net.reactions):
        for name, coeff in reaction.reactant:
            rows[net.index(name)][j] -= coeff
        for name, coeff in reaction.product:
            rows[net.index(name)][j] += coeff
    return StoichMatrix(tuple(map(tuple, rows)), net.species, tuple(net.reaction_names()))


def check_structural_hypotheses(net: ReactionNetwork) -> tuple[HypothesisResult, HypothesisResult]:
    """Check absence of auto-catalysis (G1) and the two-reaction bound (G2).

    G1 witnesses are ``(species, reaction_index)`` pairs with the species on
    both sides; G2 witnesses are species names taking part in three or more
    reactions (multiset count).
    """
    g1_witnesses = []
    usage: Counter[str] = Counter()
    for j, reaction in enumerate(net.reactions):
        for name in sorted(reaction.reactant.support & reaction.product.support, key=net.index):
            g1_witnesses.append((name, j))
        usage.update(reaction.species())
    g2_witnesses = [s for s in net.species if usage[s] > 2]
    return (
        HypothesisResult(not g1_witnesses, g1_witnesses),
        HypothesisResult(not g2_witnesses, g2_witnesses),
    )


def species_usage(net: ReactionNetwork) -> dict[str, list[int]]:
    """Reaction indices each species takes part in."""
    usage: dict[str, list[int]] = {s: [] for s in net.species}
    for j, reaction in enumerate(net.reactions):
        for name in reaction.species():
            usage[name].append(j)
    return usage


# -- canonical forms -------------------------------------------------------

@dataclass(frozen=True)
class CanonicalNetwork:
    species: tuple[str, ...]
    reactions: tuple[str, ...]


def _complex_token(c: Complex) -> str:
    if c.is_zero():
        return "0"
    return " + ".join(f"{format_fraction(k)} {s}" for s, k in sorted(c.terms))


def reaction_token(reaction: Reaction) -> str:
    """Order-independent rendering of a reaction, ignoring its label.

    A reversible reaction and its flipped form render identically.
    """
    lhs, rhs = _complex_token(reaction.reactant), _complex_token(reaction.product)
    if reaction.reversible:
        lhs, rhs = sorted((lhs, rhs))
    return f"{lhs} {reaction.arrow} {rhs}"


def canonical_form(net: ReactionNetwork) -> CanonicalNetwork:
    return CanonicalNetwork(
        tuple(sorted(net.species)),
        tuple(sorted(reaction_token(r) for r in net.reactions)),
    )


def networks_equal(a: ReactionNetwork, b: ReactionNetwork) -> bool:
    return canonical_form(a) == canonical_form(b)
