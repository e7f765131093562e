"""Exact graphical convergence checks and intermediate removal for chemical reaction networks."""

from .analysis import (
    AnalysisReport,
    InvarianceReport,
    analyze,
    validate_report_certificates,
    verify_invariance,
)
from .errors import (
    CRNError,
    DimensionMismatch,
    EmptyNetwork,
    GenerationFailed,
    NotALoop,
    ParseError,
    PreconditionViolated,
    ReactantEqualsProduct,
    SourceSpan,
    StaleCandidate,
    TooLarge,
    ValidationError,
)
from .generate import inflate_reaction, random_network
from .graphs import (
    LoopKind,
    LoopWitness,
    build_directed_sr_graph,
    build_r_graph,
    build_sr_graph,
    classify_loop,
    enumerate_directed_loops,
    enumerate_simple_loops,
    export_dot,
    graph_connected,
    positive_loop_property,
    r_strongly_connected,
    sign_pattern,
)
from .linalg import (
    KernelOrthantClass,
    LinearProgram,
    LPResult,
    OrthantClass,
    check_conservative,
    check_consistent,
    classify_kernel_orthant,
    minimal_support_conservation_vectors,
    rational_kernel_basis,
    solve_lp,
)
from .model import (
    Complex,
    Reaction,
    ReactionNetwork,
    StoichMatrix,
    canonical_form,
    check_structural_hypotheses,
    networks_equal,
    stoichiometric_matrix,
    validate_network,
)
from .parser import parse_network, read_network, serialize_network
from .reduction import (
    IntermediateCandidate,
    ReductionStep,
    ReductionTrace,
    find_intermediates,
    reduce_by,
    reduce_fully,
    removal_layout,
    remove_intermediate,
)

__version__ = "0.1.0"
