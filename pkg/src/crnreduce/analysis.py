"""Full analysis pipeline and the reduction invariance verifier.

:func:`analyze` runs every structural, graphical and linear check on a
network and turns them into a convergence verdict. The verdict is only
issued when all of its premises hold in the report; otherwise the report
says which premises failed. Kinetic assumptions on the rate functions are
echoed as preconditions and never checked.

:func:`verify_invariance` analyzes a network and its minimal reduction side
by side and flags any property that should have survived the reduction but
did not.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence

from .graphs import (
    LoopKind,
    LoopWitness,
    PLPResult,
    build_directed_sr_graph,
    build_r_graph,
    build_sr_graph,
    classify_loop,
    graph_connected,
    positive_loop_property,
    r_strongly_connected,
    sign_pattern,
)
from .linalg import (
    KernelOrthantClass,
    OrthantClass,
    check_conservative,
    check_consistent,
    classify_kernel_orthant,
    mat_vec,
    transpose,
    verify_orthant_certificate,
)
from .model import (
    HypothesisResult,
    ReactionNetwork,
    check_structural_hypotheses,
    format_fraction,
    stoichiometric_matrix,
    validate_network,
)
from .reduction import ReductionTrace, reduce_fully

SCHEMA_VERSION = "1"

KINETIC_PRECONDITIONS = (
    "rates are nonnegative, and reversible rates split into nonnegative forward and backward parts",
    "a rate vanishes when a species of its reactant is absent",
    "rates increase with reactant concentrations and depend on nothing else",
)

VERDICT_GLOBAL = (
    "global convergence: every positive solution converges to an equilibrium, "
    "unique within each stoichiometric compatibility class"
)
VERDICT_GENERIC = (
    "generic convergence: solutions converge to the set of equilibria "
    "outside a measure-zero set of initial conditions"
)
VERDICT_NO_DICHOTOMY = "kernel meets the orthant only on its boundary; the P1/P2 dichotomy does not apply"

HYPOTHESIS_NAMES = {
    "G1": "no auto-catalytic reactions",
    "G2": "every species takes part in at most two reactions",
    "G3": "conservative",
    "G4": "consistent",
}


def _frac(x: Fraction) -> str:
    return format_fraction(Fraction(x))


def _vec(v: Optional[Sequence[Fraction]]) -> Optional[list[str]]:
    return None if v is None else [_frac(x) for x in v]


def _loop_to_dict(w: Optional[LoopWitness], net: ReactionNetwork) -> Optional[dict]:
    if w is None:
        return None
    verts = [["S", net.species[i]] if t == "S" else ["R", i + 1] for t, i in w.vertices]
    return {"kind": w.kind.value, "vertices": verts, "text": w.describe(net.species, net.reaction_names())}


@dataclass
class AnalysisReport:
    """Everything :func:`analyze` found out about one network.

    ``convergence`` is None unless every premise of the convergence result
    holds; ``verdict`` is always a human-readable sentence.
    """

    network: ReactionNetwork
    hypotheses: dict[str, HypothesisResult]
    sr_connected: bool
    r_connected: bool
    r_strongly_connected: bool
    plp: PLPResult
    sigma: Optional[tuple[int, ...]]
    orthant: Optional[KernelOrthantClass]
    convergence: Optional[str]
    verdict: str
    failed_premises: list[str] = field(default_factory=list)
    assume_bounded_persistence: bool = False

    @property
    def hypotheses_hold(self) -> bool:
        return all(h.holds for h in self.hypotheses.values())

    @property
    def orthant_class(self) -> Optional[OrthantClass]:
        return None if self.orthant is None else self.orthant.kind

    def to_dict(self) -> dict[str, Any]:
        net = self.network
        hyp = {}
        for key, h in self.hypotheses.items():
            entry: dict[str, Any] = {"holds": h.holds, "description": HYPOTHESIS_NAMES[key]}
            if key == "G1":
                entry["witnesses"] = [{"species": s, "reaction": j + 1} for s, j in h.witnesses]
            elif key == "G2":
                entry["witnesses"] = [{"species": s} for s in h.witnesses]
            else:
                entry["witnesses"] = list(h.witnesses)
                entry["certificate"] = _vec(h.certificate)
            hyp[key] = entry
        orthant = None
        if self.orthant is not None:
            orthant = {
                "class": self.orthant.kind.value,
                "certificate": _vec(self.orthant.vector),
                "box_optimum": None if self.orthant.box_optimum is None else _frac(self.orthant.box_optimum),
            }
        return {
            "schema_version": SCHEMA_VERSION,
            "network": {
                "text": str(net),
                "species": list(net.species),
                "reactions": net.reaction_names(),
                "n_species": net.n_species,
                "n_reactions": net.n_reactions,
                "n_reversible": sum(r.reversible for r in net.reactions),
            },
            "hypotheses": hyp,
            "graphs": {
                "sr_connected": self.sr_connected,
                "r_connected": self.r_connected,
                "r_strongly_connected": self.r_strongly_connected,
            },
            "positive_loop_property": {
                "holds": self.plp.holds,
                "r_witness": _loop_to_dict(self.plp.witness, net),
                "sr_witness": _loop_to_dict(self.plp.sr_witness, net),
            },
            "sign_pattern": None if self.sigma is None else list(self.sigma),
            "kernel_orthant": orthant,
            "assumptions": {
                "bounded_persistence": self.assume_bounded_persistence,
                "kinetic_preconditions_unchecked": list(KINETIC_PRECONDITIONS),
            },
            "convergence": self.convergence,
            "verdict": self.verdict,
            "failed_premises": list(self.failed_premises),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def format_text(self) -> str:
        net = self.network
        n_rev = sum(r.reversible for r in net.reactions)
        lines = [f"network: {net.n_species} species, {net.n_reactions} reactions ({n_rev} reversible)"]
        for key, h in self.hypotheses.items():
            status = "holds" if h.holds else "fails"
            extra = ""
            if h.holds and h.certificate is not None:
                extra = f"  certificate ({', '.join(_vec(h.certificate))})"
            elif not h.holds and h.witnesses:
                extra = f"  witnesses {h.witnesses}"
            lines.append(f"{key} {HYPOTHESIS_NAMES[key]}: {status}{extra}")
        lines.append(f"SR-graph connected: {self.sr_connected}")
        lines.append(f"R-graph connected: {self.r_connected}")
        lines.append(f"directed SR-graph R-strongly connected: {self.r_strongly_connected}")
        if self.plp.holds:
            lines.append("positive loop property: holds")
        else:
            lines.append("positive loop property: fails")
            w = self.plp.sr_witness or self.plp.witness
            lines.append(f"  {w.kind.value}: {w.describe(net.species, net.reaction_names())}")
        if self.sigma is not None:
            lines.append(f"sign pattern: ({', '.join('+1' if s > 0 else '-1' for s in self.sigma)})")
        if self.orthant is not None:
            lines.append(
                f"kernel-orthant class: {self.orthant.kind.value}"
                f"  certificate ({', '.join(_vec(self.orthant.vector))})"
            )
        lines.append(f"verdict: {self.verdict}")
        if self.convergence is not None:
            lines.append("  assuming the kinetic preconditions:")
            lines += [f"    - {p}" for p in KINETIC_PRECONDITIONS]
        return "\n".join(lines)


def analyze(net: ReactionNetwork, assume_bounded_persistence: bool = False) -> AnalysisReport:
    """Run every check on ``net`` and derive the convergence verdict.

    The verdict needs all four structural hypotheses, a connected R-graph
    with the positive loop property, and the bounded-persistence assumption.
    With those, P2 gives global convergence and P1 generic convergence.
    """
    N = stoichiometric_matrix(net)
    m = net.n_reactions
    g1, g2 = check_structural_hypotheses(net)
    g3 = check_conservative(N, m)
    g4 = check_consistent(N, net.irreversible_indices, m)
    hypotheses = {"G1": g1, "G2": g2, "G3": g3, "G4": g4}

    sr = build_sr_graph(net, N)
    rg = build_r_graph(net, N)
    dsr = build_directed_sr_graph(net, N)
    sr_conn, r_conn, r_strong = graph_connected(sr), graph_connected(rg), r_strongly_connected(dsr)
    plp = positive_loop_property(rg)

    sigma = orthant = None
    if plp.holds:
        sigma = sign_pattern(rg)
        orthant = classify_kernel_orthant(N, sigma, m)

    failed = [f"{k} ({HYPOTHESIS_NAMES[k]})" for k, h in hypotheses.items() if not h.holds]
    if not r_conn:
        failed.append("R-graph connected")
    if not plp.holds:
        failed.append("positive loop property")
    if not assume_bounded_persistence:
        failed.append("bounded-persistence (not asserted)")

    convergence = None
    if failed:
        verdict = "inconclusive: missing " + "; ".join(failed)
    elif orthant.kind is OrthantClass.P2:
        convergence = verdict = VERDICT_GLOBAL
    elif orthant.kind is OrthantClass.P1:
        convergence = verdict = VERDICT_GENERIC
    else:
        verdict = VERDICT_NO_DICHOTOMY
    return AnalysisReport(
        net, hypotheses, sr_conn, r_conn, r_strong, plp, sigma, orthant,
        convergence, verdict, failed, assume_bounded_persistence,
    )


# -- certificate re-validation ---------------------------------------------

def _parse_vec(values: Sequence[str]) -> list[Fraction]:
    return [Fraction(x) for x in values]


def validate_report_certificates(report: dict[str, Any]) -> list[str]:
    """Re-check every certificate in a report dict against the network it carries.

    Returns a list of problems; an empty list means every certificate checks out.
    """
    from .parser import parse_network

    problems: list[str] = []
    parsed = parse_network(report["network"]["text"])
    # certificates index species in the report's order, which may differ from first appearance
    net = validate_network(ReactionNetwork(tuple(report["network"]["species"]), parsed.reactions))
    N = stoichiometric_matrix(net)
    m = net.n_reactions
    hyp = report["hypotheses"]

    for w in hyp["G1"]["witnesses"]:
        r = net.reactions[w["reaction"] - 1]
        if w["species"] not in r.reactant.support & r.product.support:
            problems.append(f"G1 witness {w} is not auto-catalytic")
    if hyp["G1"]["holds"] == bool(hyp["G1"]["witnesses"]):
        problems.append("G1 verdict disagrees with its witnesses")
    counts = {s: 0 for s in net.species}
    for r in net.reactions:
        for s in r.species():
            counts[s] += 1
    for w in hyp["G2"]["witnesses"]:
        if counts.get(w["species"], 0) <= 2:
            problems.append(f"G2 witness {w['species']} takes part in at most two reactions")
    if hyp["G2"]["holds"] == bool(hyp["G2"]["witnesses"]):
        problems.append("G2 verdict disagrees with its witnesses")

    if hyp["G3"]["holds"]:
        c = _parse_vec(hyp["G3"]["certificate"])
        if any(mat_vec(transpose(N, m), c)) or any(x < 1 for x in c):
            problems.append("G3 certificate is not a positive conservation law")
    if hyp["G4"]["holds"]:
        v = _parse_vec(hyp["G4"]["certificate"])
        if any(mat_vec(N, v)) or any(v[j] < 1 for j in net.irreversible_indices):
            problems.append("G4 certificate is not a consistent flux vector")

    plp = report["positive_loop_property"]
    if not plp["holds"]:
        w = plp["sr_witness"]
        if w is None:
            problems.append("failed positive loop property carries no SR witness")
        else:
            sr = build_sr_graph(net, N)
            verts = [("S", net.index(name)) if t == "S" else ("R", name - 1) for t, name in w["vertices"]]
            try:
                if classify_loop(sr, verts) is not LoopKind.O_LOOP:
                    problems.append("PLP witness is not an o-loop")
            except Exception as exc:  # NotALoop and malformed input
                problems.append(f"PLP witness is not a loop: {exc}")

    orthant = report["kernel_orthant"]
    if orthant is not None:
        sigma = report["sign_pattern"]
        rg = build_r_graph(net, N)
        for (j, k), labels in rg.edges.items():
            if len(labels) == 1 and sigma[j] * sigma[k] != next(iter(labels)):
                problems.append(f"sign pattern disagrees with R-graph edge R{j + 1}--R{k + 1}")
        cert = KernelOrthantClass(OrthantClass(orthant["class"]), tuple(_parse_vec(orthant["certificate"])))
        if not verify_orthant_certificate(N, sigma, cert, m):
            problems.append(f"{orthant['class']} certificate does not re-check")
    return problems


# -- invariance under reduction --------------------------------------------

@dataclass(frozen=True)
class AgreementFlag:
    """One property compared between a network and its reduction.

    ``required`` is true when the hypotheses of the matching invariance
    result hold, so a disagreement would be a bug.
    """

    name: str
    original: Any
    reduced: Any
    required: bool
    basis: str

    @property
    def agrees(self) -> bool:
        return self.original == self.reduced

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "original": self.original,
            "reduced": self.reduced,
            "agrees": self.agrees,
            "required": self.required,
            "basis": self.basis,
        }


@dataclass
class InvarianceReport:
    original: AnalysisReport
    reduced: AnalysisReport
    trace: ReductionTrace
    flags: list[AgreementFlag]

    @property
    def violations(self) -> list[AgreementFlag]:
        return [f for f in self.flags if f.required and not f.agrees]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "original": self.original.to_dict(),
            "reduced": self.reduced.to_dict(),
            "trace": self.trace.to_dict(),
            "flags": [f.to_dict() for f in self.flags],
            "ok": self.ok,
            "violations": [f.name for f in self.violations],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def format_text(self) -> str:
        lines = [f"removed intermediates: {', '.join(self.trace.removed) or '(none)'}"]
        lines.append("minimal network:")
        lines += [f"  {r}" for r in self.reduced.network.reactions]
        for f in self.flags:
            mark = "agree" if f.agrees else "DISAGREE"
            need = "required" if f.required else "not required"
            lines.append(f"{f.name}: {f.original} vs {f.reduced}  [{mark}, {need}: {f.basis}]")
        if self.ok:
            lines.append("invariance: ok")
        else:
            lines.append("invariance VIOLATED (implementation bug): " + ", ".join(f.name for f in self.violations))
        return "\n".join(lines)


def verify_invariance(net: ReactionNetwork, assume_bounded_persistence: bool = False) -> InvarianceReport:
    """Compare ``net`` with its minimal reduction.

    Connectivity and the positive loop property must agree whenever ``net``
    satisfies (G1)-(G4), and the four hypotheses must survive the reduction.
    The kernel-orthant class must agree when, in addition, the reduced
    R-graph has the positive loop property.
    """
    reduced_net, trace = reduce_fully(net)
    a = analyze(net, assume_bounded_persistence)
    b = analyze(reduced_net, assume_bounded_persistence)
    base = a.hypotheses_hold
    flags = [
        AgreementFlag("hypotheses G1-G4", a.hypotheses_hold, b.hypotheses_hold, base,
                      "intermediate removal preserves the structural hypotheses"),
        AgreementFlag("R-graph connected", a.r_connected, b.r_connected, base,
                      "connectivity invariance under intermediate removal"),
        AgreementFlag("SR-graph connected", a.sr_connected, b.sr_connected, base,
                      "connectivity invariance together with connectivity equivalence"),
        AgreementFlag("R-strongly connected", a.r_strongly_connected, b.r_strongly_connected, base,
                      "connectivity invariance together with connectivity equivalence"),
        AgreementFlag("positive loop property", a.plp.holds, b.plp.holds, base,
                      "positive-loop invariance under intermediate removal"),
        AgreementFlag(
            "kernel-orthant class",
            None if a.orthant is None else a.orthant.kind.value,
            None if b.orthant is None else b.orthant.kind.value,
            base and b.plp.holds,
            "kernel-orthant invariance under intermediate removal",
        ),
    ]
    return InvarianceReport(a, b, trace, flags)
