"""Species-reaction graphs, R-graphs and the loop conditions on them.

Vertices are tagged tuples: ``("S", i)`` for species ``i`` and ``("R", j)``
for reaction ``j``. Edge labels are ``+1``/``-1`` and always equal
``-sign(N_ij)``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .errors import NotALoop, PreconditionViolated, TooLarge
from .model import ReactionNetwork, StoichMatrix

Vertex = tuple[str, int]


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _vkey(v: Vertex) -> tuple[int, int]:
    # species sort before reactions
    return (0 if v[0] == "S" else 1, v[1])


@dataclass(frozen=True)
class SRGraph:
    species: tuple[str, ...]
    reactions: tuple[str, ...]
    edges: dict[tuple[int, int], int]  # (species, reaction) -> label

    @property
    def vertices(self) -> list[Vertex]:
        return [("S", i) for i in range(len(self.species))] + [("R", j) for j in range(len(self.reactions))]

    def label(self, u: Vertex, v: Vertex) -> int:
        if u[0] == "R":
            u, v = v, u
        return self.edges[(u[1], v[1])]

    def has_edge(self, u: Vertex, v: Vertex) -> bool:
        if u[0] == v[0]:
            return False
        if u[0] == "R":
            u, v = v, u
        return (u[1], v[1]) in self.edges

    def adjacency(self) -> dict[Vertex, list[Vertex]]:
        adj: dict[Vertex, list[Vertex]] = {v: [] for v in self.vertices}
        for (i, j) in sorted(self.edges):
            adj[("S", i)].append(("R", j))
            adj[("R", j)].append(("S", i))
        for nbrs in adj.values():
            nbrs.sort(key=_vkey)
        return adj


@dataclass(frozen=True)
class DirectedSRGraph:
    species: tuple[str, ...]
    reactions: tuple[str, ...]
    arcs: dict[tuple[Vertex, Vertex], int]

    @property
    def vertices(self) -> list[Vertex]:
        return [("S", i) for i in range(len(self.species))] + [("R", j) for j in range(len(self.reactions))]

    def successors(self) -> dict[Vertex, list[Vertex]]:
        succ: dict[Vertex, list[Vertex]] = {v: [] for v in self.vertices}
        for (u, v) in sorted(self.arcs, key=lambda a: (_vkey(a[0]), _vkey(a[1]))):
            succ[u].append(v)
        return succ


@dataclass(frozen=True)
class RGraph:
    reactions: tuple[str, ...]
    edges: dict[tuple[int, int], frozenset[int]]  # j < k -> label set
    # species realising each label, used to lift R-loops to SR-loops
    via: dict[tuple[int, int], dict[int, int]] = field(default_factory=dict, compare=False)

    def labels(self, j: int, k: int) -> frozenset[int]:
        return self.edges[(min(j, k), max(j, k))]

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {j: [] for j in range(len(self.reactions))}
        for (j, k) in sorted(self.edges):
            adj[j].append(k)
            adj[k].append(j)
        return adj


class LoopKind(str, Enum):
    E_LOOP = "e-loop"
    O_LOOP = "o-loop"
    ODD_R_LOOP = "odd R-loop"


@dataclass(frozen=True)
class LoopWitness:
    """Closed vertex sequence (first == last) of a simple loop."""

    vertices: tuple[Vertex, ...]
    kind: LoopKind

    def describe(self, species: Sequence[str], reactions: Sequence[str]) -> str:
        names = [species[i] if t == "S" else reactions[i] for t, i in self.vertices]
        return " -- ".join(names)


# -- construction ----------------------------------------------------------

def build_sr_graph(net: ReactionNetwork, N: StoichMatrix) -> SRGraph:
    edges = {}
    for i, row in enumerate(N):
        for j, x in enumerate(row):
            if x:
                edges[(i, j)] = -_sign(x)
    return SRGraph(net.species, tuple(net.reaction_names()), edges)


def build_directed_sr_graph(net: ReactionNetwork, N: StoichMatrix) -> DirectedSRGraph:
    """Species -> reaction arcs encode rate dependence, reaction -> species arcs participation."""
    arcs: dict[tuple[Vertex, Vertex], int] = {}
    for j, reaction in enumerate(net.reactions):
        rv = ("R", j)
        reactants = reaction.reactant.support
        involved = reactants | reaction.product.support
        for name in involved:
            i = net.index(name)
            label = -_sign(N[i][j])
            arcs[(rv, ("S", i))] = label
            if reaction.reversible or name in reactants:
                arcs[(("S", i), rv)] = label
    return DirectedSRGraph(net.species, tuple(net.reaction_names()), arcs)


def build_r_graph(net: ReactionNetwork, N: StoichMatrix) -> RGraph:
    m = net.n_reactions
    edges: dict[tuple[int, int], set[int]] = {}
    via: dict[tuple[int, int], dict[int, int]] = {}
    for i, row in enumerate(N):
        cols = [j for j in range(m) if row[j]]
        for a in range(len(cols)):
            for b in range(a + 1, len(cols)):
                j, k = cols[a], cols[b]
                label = -_sign(row[j] * row[k])
                edges.setdefault((j, k), set()).add(label)
                via.setdefault((j, k), {}).setdefault(label, i)
    return RGraph(
        tuple(net.reaction_names()),
        {e: frozenset(ls) for e, ls in edges.items()},
        via,
    )


# -- connectivity ----------------------------------------------------------

def _components(nodes: Iterable, adj: dict) -> list[list]:
    seen = set()
    comps = []
    for start in nodes:
        if start in seen:
            continue
        seen.add(start)
        comp = [start]
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        comps.append(comp)
    return comps


def connected_components(g: Union[SRGraph, RGraph]) -> list[list]:
    if isinstance(g, RGraph):
        return _components(range(len(g.reactions)), g.adjacency())
    return _components(g.vertices, g.adjacency())


def graph_connected(g: Union[SRGraph, RGraph]) -> bool:
    """Undirected connectivity; the empty and one-vertex graphs count as connected."""
    return len(connected_components(g)) <= 1


def _reachable(start: Vertex, succ: dict[Vertex, list[Vertex]]) -> set[Vertex]:
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in succ[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def r_strongly_connected(dsr: DirectedSRGraph) -> bool:
    """Every ordered pair of reaction vertices is joined by a directed path.

    Equivalent to: every reaction is reachable from the first one and the
    first one is reachable from every reaction.
    """
    m = len(dsr.reactions)
    if m <= 1:
        return True
    succ = dsr.successors()
    pred: dict[Vertex, list[Vertex]] = {v: [] for v in succ}
    for u, ws in succ.items():
        for w in ws:
            pred[w].append(u)
    root = ("R", 0)
    forward, backward = _reachable(root, succ), _reachable(root, pred)
    return all(("R", j) in forward and ("R", j) in backward for j in range(m))


# -- positive loop property and sign pattern -------------------------------

@dataclass
class PLPResult:
    """Verdict of the positive loop property.

    On failure ``witness`` is an R-graph loop with an odd number of negative
    labels and ``sr_witness`` the corresponding SR-graph o-loop when the
    connecting species are distinct and known (always the case for R-graphs
    built from a network satisfying the two-reaction bound).
    """

    holds: bool
    witness: Optional[LoopWitness] = None
    sr_witness: Optional[LoopWitness] = None

    def __bool__(self) -> bool:
        return self.holds


def _lift_r_loop(rg: RGraph, cycle: list[int], labels: list[int]) -> Optional[LoopWitness]:
    """SR loop through the species realising ``labels`` along the closed reaction ``cycle``."""
    vertices: list[Vertex] = []
    used = set()
    for t in range(len(cycle) - 1):
        j, k = cycle[t], cycle[t + 1]
        i = rg.via.get((min(j, k), max(j, k)), {}).get(labels[t])
        if i is None or i in used:
            return None
        used.add(i)
        vertices += [("R", j), ("S", i)]
    vertices.append(("R", cycle[0]))
    return LoopWitness(tuple(vertices), LoopKind.O_LOOP)


def _balance(rg: RGraph):
    """Breadth-first sign assignment; returns (sigma, conflict) with conflict = (j, k) or None."""
    m = len(rg.reactions)
    adj = rg.adjacency()
    sigma = [0] * m
    parent: list[Optional[int]] = [None] * m
    for root in range(m):
        if sigma[root]:
            continue
        sigma[root] = 1
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                (label,) = rg.labels(u, w)
                if not sigma[w]:
                    sigma[w] = sigma[u] * label
                    parent[w] = u
                    queue.append(w)
                elif sigma[w] != sigma[u] * label:
                    return sigma, parent, (u, w)
    return sigma, parent, None


def _tree_cycle(parent: list[Optional[int]], u: int, w: int) -> list[int]:
    """Closed simple cycle formed by the tree paths to ``u`` and ``w`` plus the edge ``u -- w``."""
    def path_to_root(x: int) -> list[int]:
        out = [x]
        while parent[out[-1]] is not None:
            out.append(parent[out[-1]])
        return out

    pu, pw = path_to_root(u), path_to_root(w)
    ancestors_w = {x: d for d, x in enumerate(pw)}
    k = next(d for d, x in enumerate(pu) if x in ancestors_w)
    lca = pu[k]
    down = list(reversed(pw[: ancestors_w[lca]]))
    return pu[: k + 1] + down + [u]


def positive_loop_property(rg: RGraph) -> PLPResult:
    for (j, k), labels in sorted(rg.edges.items()):
        if len(labels) > 1:
            witness = LoopWitness((("R", j), ("R", k), ("R", j)), LoopKind.ODD_R_LOOP)
            return PLPResult(False, witness, _lift_r_loop(rg, [j, k, j], [1, -1]))
    _, parent, conflict = _balance(rg)
    if conflict is None:
        return PLPResult(True)
    cycle = _tree_cycle(parent, *conflict)
    labels = [next(iter(rg.labels(cycle[t], cycle[t + 1]))) for t in range(len(cycle) - 1)]
    witness = LoopWitness(tuple(("R", j) for j in cycle), LoopKind.ODD_R_LOOP)
    return PLPResult(False, witness, _lift_r_loop(rg, cycle, labels))


def sign_pattern(rg: RGraph) -> tuple[int, ...]:
    """Orthant sign vector: +1 on the smallest reaction of each component, propagated by edge labels.

    Raises:
        PreconditionViolated: the R-graph lacks the positive loop property.
    """
    if not positive_loop_property(rg):
        raise PreconditionViolated("sign pattern is undefined without the positive loop property")
    sigma, _, _ = _balance(rg)
    return tuple(sigma)


# -- loops -----------------------------------------------------------------

def _check_loop(sr: SRGraph, loop: Sequence[Vertex]) -> None:
    loop = [tuple(v) for v in loop]
    if len(loop) < 5 or loop[0] != loop[-1]:
        raise NotALoop("a loop is a closed vertex sequence of length at least 4")
    body = loop[:-1]
    if len(set(body)) != len(body):
        raise NotALoop("loop repeats a vertex")
    valid = set(sr.vertices)
    for u, v in zip(loop, loop[1:]):
        if u not in valid or v not in valid or not sr.has_edge(u, v):
            raise NotALoop(f"{u} and {v} are not adjacent")


def classify_loop(sr: SRGraph, loop: Sequence[Vertex]) -> LoopKind:
    """Classify a simple SR loop of length ``2*lam`` as an e-loop or o-loop.

    The label product is compared with ``(-1)**lam`` and cross-checked
    against the parity of same-sign ``S -- R -- S`` segments.
    """
    _check_loop(sr, loop)
    loop = [tuple(v) for v in loop]
    lam = (len(loop) - 1) // 2
    labels = [sr.label(u, v) for u, v in zip(loop, loop[1:])]
    product = 1
    for x in labels:
        product *= x
    by_product = product == (-1) ** lam

    same = 0
    for t, v in enumerate(loop[:-1]):
        if v[0] == "R":
            before = labels[t - 1]  # wraps around for t == 0
            if before == labels[t]:
                same += 1
    by_segments = same % 2 == 0
    if by_product != by_segments:  # pragma: no cover - the two parities always agree
        raise AssertionError("label product and segment count disagree")
    return LoopKind.E_LOOP if by_product else LoopKind.O_LOOP


def _canonical_cycle(body: list[Vertex]) -> tuple[Vertex, ...]:
    k = min(range(len(body)), key=lambda t: _vkey(body[t]))
    rot = body[k:] + body[:k]
    rev = [rot[0]] + list(reversed(rot[1:]))
    best = min(rot, rev, key=lambda seq: [_vkey(v) for v in seq])
    return tuple(best) + (best[0],)


def enumerate_simple_loops(sr: SRGraph, max_vertices: int = 24) -> list[LoopWitness]:
    """All simple loops of the SR-graph, each reported once (exhaustive search).

    Loops start at their smallest vertex and are listed in the direction with
    the smaller second vertex.
    """
    vertices = sorted(sr.vertices, key=_vkey)
    if len(vertices) > max_vertices:
        raise TooLarge(f"{len(vertices)} vertices exceed the loop enumeration bound {max_vertices}")
    adj = sr.adjacency()
    order = {v: t for t, v in enumerate(vertices)}
    loops = []
    for start in vertices:
        s = order[start]
        path = [start]
        on_path = {start}

        def extend(u: Vertex) -> None:
            for w in adj[u]:
                if w == start and len(path) >= 4:
                    if order[path[1]] < order[path[-1]]:
                        body = list(path)
                        kind = classify_loop(sr, body + [start])
                        loops.append(LoopWitness(_canonical_cycle(body), kind))
                elif order[w] > s and w not in on_path:
                    path.append(w)
                    on_path.add(w)
                    extend(w)
                    path.pop()
                    on_path.discard(w)

        extend(start)
    loops.sort(key=lambda lw: [_vkey(v) for v in lw.vertices])
    return loops


def enumerate_directed_loops(dsr: DirectedSRGraph, species: Optional[Iterable[int]] = None) -> list[tuple[Vertex, ...]]:
    """Directed simple cycles of the directed SR-graph (exhaustive search).

    With ``species`` given, only cycles whose species vertices lie in that set
    are explored. Each cycle is returned closed, starting at its smallest vertex.
    """
    allowed_species = None if species is None else set(species)
    succ = dsr.successors()
    if allowed_species is not None:
        succ = {
            u: [w for w in ws if w[0] == "R" or w[1] in allowed_species]
            for u, ws in succ.items()
            if u[0] == "R" or u[1] in allowed_species
        }
    vertices = sorted(succ, key=_vkey)
    order = {v: t for t, v in enumerate(vertices)}
    cycles = []
    for start in vertices:
        s = order[start]
        path = [start]
        on_path = {start}

        def extend(u: Vertex) -> None:
            for w in succ[u]:
                if w == start and len(path) >= 2:
                    cycles.append(tuple(path) + (start,))
                elif w in order and order[w] > s and w not in on_path:
                    path.append(w)
                    on_path.add(w)
                    extend(w)
                    path.pop()
                    on_path.discard(w)

        extend(start)
    return cycles


# -- DOT export ------------------------------------------------------------

def _label_text(labels: Iterable[int]) -> str:
    return ",".join("+" if x > 0 else "-" for x in sorted(labels, reverse=True))


def _node_ids(species: Sequence[str], reactions: Sequence[str]) -> tuple[list[str], list[str]]:
    taken = set(species)
    rids = []
    for j, name in enumerate(reactions):
        candidate = name
        if candidate in taken:
            candidate = f"R{j + 1}"
        while candidate in taken:
            candidate = f"_{candidate}"
        taken.add(candidate)
        rids.append(candidate)
    return list(species), rids


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(g: Union[SRGraph, DirectedSRGraph, RGraph], name: Optional[str] = None) -> str:
    """Deterministic Graphviz text: species as ellipses, reactions as boxes, edges labelled +/-."""
    if isinstance(g, RGraph):
        _, rids = _node_ids((), g.reactions)
        lines = [f"graph {name or 'R'} {{"]
        lines += [f"  {_quote(r)} [shape=box];" for r in rids]
        for (j, k), labels in sorted(g.edges.items()):
            lines.append(f"  {_quote(rids[j])} -- {_quote(rids[k])} [label={_quote(_label_text(labels))}];")
        lines.append("}")
        return "\n".join(lines) + "\n"

    sids, rids = _node_ids(g.species, g.reactions)

    def vid(v: Vertex) -> str:
        return _quote(sids[v[1]] if v[0] == "S" else rids[v[1]])

    directed = isinstance(g, DirectedSRGraph)
    lines = [f"{'digraph' if directed else 'graph'} {name or ('DSR' if directed else 'SR')} {{"]
    lines += [f"  {_quote(s)} [shape=ellipse];" for s in sids]
    lines += [f"  {_quote(r)} [shape=box];" for r in rids]
    if directed:
        for (u, v), label in sorted(g.arcs.items(), key=lambda a: (_vkey(a[0][0]), _vkey(a[0][1]))):
            lines.append(f"  {vid(u)} -> {vid(v)} [label={_quote(_label_text([label]))}];")
    else:
        for (i, j), label in sorted(g.edges.items()):
            lines.append(f"  {vid(('S', i))} -- {vid(('R', j))} [label={_quote(_label_text([label]))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
