"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest -s tests/test_acceptance.py`` to see the summary lines.
"""

from __future__ import annotations

import itertools
import random
import time

from crnreduce import (
    OrthantClass,
    analyze,
    build_directed_sr_graph,
    build_r_graph,
    build_sr_graph,
    classify_kernel_orthant,
    classify_loop,
    enumerate_directed_loops,
    enumerate_simple_loops,
    find_intermediates,
    graph_connected,
    minimal_support_conservation_vectors,
    networks_equal,
    parse_network,
    positive_loop_property,
    r_strongly_connected,
    random_network,
    rational_kernel_basis,
    reduce_by,
    reduce_fully,
    remove_intermediate,
    removal_layout,
    sign_pattern,
    stoichiometric_matrix,
    verify_invariance,
)
from crnreduce.graphs import LoopKind, connected_components
from crnreduce.linalg import mat_vec, rank
from crnreduce.model import reaction_token, species_usage
from crnreduce.networks import (
    ONE_SITE,
    RKIP,
    RKIP_REDUCED,
    SELF_LOOP_PAIR,
    SELF_LOOP_SPLIT,
    phosphorelay,
    processive_phosphorylation,
)

from helpers import reduce_in_random_order, remove_self_paired_intermediate


def verdict(number: int, ok: bool, detail: str) -> None:
    print(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def r_edges(net):
    rg = build_r_graph(net, stoichiometric_matrix(net))
    return rg.edges


def _span_equal(a, b, m):
    return rank(a, m) == rank(b, m) == rank(list(a) + list(b), m)


def test_criterion_1_one_site_golden():
    t0 = time.perf_counter()
    net = parse_network(ONE_SITE)
    N = stoichiometric_matrix(net)
    rg = build_r_graph(net, N)
    plp = positive_loop_property(rg)
    reduced, _ = reduce_fully(net)
    N_red = stoichiometric_matrix(reduced)
    cls = classify_kernel_orthant(N, sign_pattern(rg)).kind
    cls_red = classify_kernel_orthant(N_red, sign_pattern(build_r_graph(reduced, N_red))).kind
    elapsed = time.perf_counter() - t0

    four_cycle = {(0, 1): {1}, (1, 2): {1}, (2, 3): {1}, (0, 3): {1}}
    checks = {
        "6 species / 4 reactions": (net.n_species, net.n_reactions) == (6, 4),
        "R-graph 4-cycle, all +": {e: set(l) for e, l in rg.edges.items()} == four_cycle,
        "PLP": plp.holds,
        "R-graph connected": graph_connected(rg),
        "reduced = {S0 -> S1, S1 -> S0}": networks_equal(reduced, parse_network("S0 -> S1\nS1 -> S0"))
        and not any(r.reversible for r in reduced.reactions),
        "both P2": cls is cls_red is OrthantClass.P2,
        "< 50 ms": elapsed < 0.05,
    }
    failed = [k for k, v in checks.items() if not v]
    verdict(1, not failed, f"{elapsed * 1000:.1f} ms; failed: {failed or 'none'}")


def test_criterion_2_rkip_golden():
    net = parse_network(RKIP)
    reduced, trace = reduce_by(net, ["M_pE", "RKE_p", "K_pP"])
    expected = parse_network(RKIP_REDUCED)
    # index reactions as listed R*_1..R*_4
    slot = {reaction_token(r): j for j, r in enumerate(expected.reactions)}
    perm = [slot[reaction_token(r)] for r in reduced.reactions]
    edges = {
        tuple(sorted((perm[j], perm[k]))): labels for (j, k), labels in r_edges(reduced).items()
    }
    N_red = stoichiometric_matrix(reduced)
    res = classify_kernel_orthant(N_red, sign_pattern(build_r_graph(reduced, N_red)))
    inv = verify_invariance(net)
    checks = {
        "R*_1..R*_4": networks_equal(reduced, expected),
        # the catalyst of the M_pE step is M_p (E appears on one side only)
        "cancelled catalysts": [s.cancelled for s in trace.steps] == [("M_p",), (), ("P",)],
        "R-graph {R1R2, R2R3, R2R4, R4R1} all +": edges
        == {(0, 1): {1}, (1, 2): {1}, (1, 3): {1}, (0, 3): {1}},
        "(1,1,1,1) in ker N* and int K*": res.kind is OrthantClass.P2
        and not any(mat_vec(N_red, (1, 1, 1, 1)))
        and sign_pattern(build_r_graph(reduced, N_red)) == (1, 1, 1, 1),
        "invariance flags agree": inv.ok and all(f.agrees for f in inv.flags),
    }
    failed = [k for k, v in checks.items() if not v]
    verdict(2, not failed, f"steps {trace.removed}; failed: {failed or 'none'}")


def test_criterion_3_processive_n_site():
    t0 = time.perf_counter()
    bad = []
    for n in range(1, 21):
        net = parse_network(processive_phosphorylation(n))
        reduced, _ = reduce_fully(net)
        # the same two reactions for every n; the fully phosphorylated form is S{n}
        same = networks_equal(reduced, parse_network(f"S0 -> S{n}\nS{n} -> S0"))
        classes = [analyze(x).orthant_class for x in (net, reduced)]
        if not same or classes != [OrthantClass.P2, OrthantClass.P2]:
            bad.append(n)
    elapsed = time.perf_counter() - t0
    verdict(3, not bad and elapsed < 1.0, f"n = 1..20 in {elapsed:.2f} s; failing n: {bad or 'none'}")


def _relay_r_graph_edges(M):
    """Expected reduced R-graph, keyed by reaction names R1..RM, T1..T(M-1)."""
    edges = set()
    for m in range(1, M + 1):
        if m >= 2:
            edges.add(frozenset({f"R{m}", f"T{m - 1}"}))
        if m <= M - 1:
            edges.add(frozenset({f"R{m}", f"T{m}"}))
        if 2 <= m <= M - 1:
            edges.add(frozenset({f"T{m - 1}", f"T{m}"}))
    return edges


def _relay_names(M):
    names = {reaction_token(parse_network("S0_1 -> S2_1").reactions[0]): "R1"}
    for m in range(2, M):
        names[reaction_token(parse_network(f"S1_{m} <-> S2_{m}").reactions[0])] = f"R{m}"
    names[reaction_token(parse_network(f"S1_{M} -> S0_{M}").reactions[0])] = f"R{M}"
    for m in range(1, M):
        text = f"S2_{m} + S0_{m + 1} -> S0_{m} + S1_{m + 1}"
        names[reaction_token(parse_network(text).reactions[0])] = f"T{m}"
    return names


def test_criterion_4_phosphorelay():
    bad = []
    for M in range(2, 11):
        reduced, _ = reduce_fully(parse_network(phosphorelay(M)))
        names = _relay_names(M)
        labels = [names.get(reaction_token(r)) for r in reduced.reactions]
        edges = r_edges(reduced)
        got = {frozenset({labels[j], labels[k]}) for j, k in edges}
        N = stoichiometric_matrix(reduced)
        res = classify_kernel_orthant(N, sign_pattern(build_r_graph(reduced, N)))
        ok = (
            reduced.n_reactions == 2 * M - 1
            and None not in labels
            and got == _relay_r_graph_edges(M)
            and all(l == {1} for l in edges.values())
            and not any(mat_vec(N, (1,) * (2 * M - 1)))
            and res.kind is OrthantClass.P2
        )
        if not ok:
            bad.append(M)
    verdict(4, not bad, f"M = 2..10; failing M: {bad or 'none'}")


def test_criterion_5_self_paired_counterexamples():
    pair = parse_network(SELF_LOOP_PAIR)
    plp = positive_loop_property(build_r_graph(pair, stoichiometric_matrix(pair)))
    pair_star = remove_self_paired_intermediate(pair, "Y")
    plp_star = positive_loop_property(build_r_graph(pair_star, stoichiometric_matrix(pair_star)))

    split = parse_network(SELF_LOOP_SPLIT)
    split_star = remove_self_paired_intermediate(split, "Y")
    comps = len(connected_components(build_r_graph(split, stoichiometric_matrix(split))))
    comps_star = len(connected_components(build_r_graph(split_star, stoichiometric_matrix(split_star))))
    checks = {
        "Y not an intermediate": find_intermediates(pair) == [] and find_intermediates(split) == [],
        "edge carries {+,-}": r_edges(pair) == {(0, 1): {1, -1}},
        "PLP(G) false with witness": not plp.holds and plp.witness is not None and plp.sr_witness is not None,
        "PLP(G*) true": plp_star.holds,
        "R-graph: 1 component vs 2": (comps, comps_star) == (1, 2),
    }
    failed = [k for k, v in checks.items() if not v]
    verdict(5, not failed, f"failed: {failed or 'none'}")


def test_criterion_6_plp_equals_e_loops():
    rng = random.Random(6)
    disagreements = total = 0
    while total < 500:
        net = random_network(12, 8, rng.randint(0, 2), rng=rng)
        if net.n_species + net.n_reactions > 20:
            continue
        N = stoichiometric_matrix(net)
        sr = build_sr_graph(net, N)
        all_e = all(classify_loop(sr, l.vertices) is LoopKind.E_LOOP for l in enumerate_simple_loops(sr))
        if positive_loop_property(build_r_graph(net, N)).holds != all_e:
            disagreements += 1
        total += 1
    verdict(6, disagreements == 0, f"{total} networks, {disagreements} disagreements")


def test_criterion_7_connectivity_equivalence():
    rng = random.Random(7)
    disagreements = 0
    disconnected = 0
    for _ in range(500):
        net = random_network(10, 7, rng.randint(0, 2), require=("G3", "G4"), rng=rng)
        N = stoichiometric_matrix(net)
        preds = (
            r_strongly_connected(build_directed_sr_graph(net, N)),
            graph_connected(build_sr_graph(net, N)),
            graph_connected(build_r_graph(net, N)),
        )
        disconnected += not preds[1]
        disagreements += len(set(preds)) != 1
    verdict(7, disagreements == 0, f"500 networks ({disconnected} disconnected), {disagreements} disagreements")


def test_criterion_8_invariance():
    rng = random.Random(8)
    violations = 0
    kernel_checked = 0
    for _ in range(500):
        net = random_network(10, 7, rng.randint(1, 2), require=("G3", "G4"), rng=rng)
        report = verify_invariance(net)
        violations += not report.ok
        kernel_checked += report.flags[-1].required
    verdict(8, violations == 0, f"500 networks, kernel class compared on {kernel_checked}, {violations} violations")


def _confluence_population(seed, size=200):
    rng = random.Random(seed)
    nets = []
    while len(nets) < size:
        net = random_network(10, 8, rng.randint(2, 3), rng=rng)
        if len(find_intermediates(net)) >= 2:
            nets.append(net)
    return nets


def test_criterion_9_confluence():
    differing = []
    for i, net in enumerate(_confluence_population(9)):
        results = [reduce_fully(net, rng=random.Random(1000 * i + k))[0] for k in range(5)]
        if not all(networks_equal(results[0], r) for r in results[1:]):
            differing.append(i)
    verdict(9, not differing, f"200 networks x 5 free random orders; {len(differing)} with differing minimal networks")


def test_criterion_9_fixed_removal_set():
    """Supplement: orders of one fixed set of intermediates always agree."""
    differing = 0
    for i, net in enumerate(_confluence_population(9)):
        reference, trace = reduce_fully(net)
        for k in range(5):
            got = reduce_in_random_order(net, trace.removed, random.Random(1000 * i + k))
            differing += got is None or not networks_equal(got[0], reference)
    print(f"criterion  9 (fixed removal set): {'PASS' if not differing else 'FAIL'}  {differing} differing runs")
    assert differing == 0


def test_criterion_10_kernel_and_sign_correspondence():
    rng = random.Random(10)
    failures = 0
    sigma_checked = 0
    for _ in range(200):
        net = random_network(10, 7, rng.randint(1, 2), require=("G3", "G4"), rng=rng)
        cand = rng.choice(find_intermediates(net))
        big, small = removal_layout(net, cand)
        m = small.n_reactions
        N, N_star = stoichiometric_matrix(big), stoichiometric_matrix(small)
        ker, ker_star = rational_kernel_basis(N, m + 1), rational_kernel_basis(N_star, m)
        lifted = [tuple(v) + (v[-1],) for v in ker_star]
        ok = (
            networks_equal(small, remove_intermediate(net, cand)[0])
            and len(ker) == len(ker_star)
            and all(not any(mat_vec(N, w)) for w in lifted)
            and (not ker or _span_equal(ker, lifted, m + 1))
            and all(w[m - 1] == w[m] for w in ker)
            and all(not any(mat_vec(N_star, w[:m])) for w in ker)
        )
        rg_star = build_r_graph(small, N_star)
        if positive_loop_property(rg_star).holds:
            sigma_checked += 1
            s_star = sign_pattern(rg_star)
            ok = ok and sign_pattern(build_r_graph(big, N)) == s_star + (s_star[-1],)
        failures += not ok
    verdict(10, failures == 0, f"200 removals (sigma compared on {sigma_checked}), {failures} failures")


def _minimal_supports_brute_force(N, n, m):
    """Supports S with a one-dimensional space of conservation laws on S, spanned by a positive vector."""
    found = []
    for size in range(1, n + 1):
        for S in itertools.combinations(range(n), size):
            if any(set(T) <= set(S) for T in found):
                continue
            sub = [[N[i][j] for i in S] for j in range(m)]
            basis = rational_kernel_basis(sub, size)
            if len(basis) != 1:
                continue
            v = basis[0]
            if all(x > 0 for x in v) or all(x < 0 for x in v):
                found.append(S)
    return {frozenset(S) for S in found}


def test_criterion_11_minimal_supports_and_directed_loops():
    rng = random.Random(11)
    failures = []
    for t in range(100):
        net = random_network(10, 8, rng.randint(0, 2), require=("G4", "irreversible", "sr_connected"), rng=rng)
        N = stoichiometric_matrix(net)
        n, m = net.n_species, net.n_reactions
        ok = all(len(js) == 2 for js in species_usage(net).values())
        oracle = _minimal_supports_brute_force(N, n, m)
        library = {frozenset(i for i, x in enumerate(v) if x) for v in minimal_support_conservation_vectors(N, ncols=m)}
        ok = ok and oracle == library
        dsr = build_directed_sr_graph(net, N)
        for S in oracle:
            loops = enumerate_directed_loops(dsr, species=S)
            if not any({v[1] for v in loop if v[0] == "S"} == S for loop in loops):
                ok = False
        if not ok:
            failures.append(t)
    verdict(11, not failures, f"100 networks; failing: {failures or 'none'}")
