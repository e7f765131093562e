"""Reference networks from the phosphorylation and signalling literature.

Each builder returns ``.crn`` text, so the networks can be written to disk
or fed to :func:`~crnreduce.parser.parse_network` as they are.
"""

from __future__ import annotations

ONE_SITE = """\
S0 + E <-> S0E
S0E -> S1 + E
S1 + F <-> S1F
S1F -> S0 + F"""

# Raf kinase inhibitor protein pathway
RKIP = """\
R + K <-> RK
RK + E_p <-> RKE_p
RKE_p -> R + K_p + E
M_p + E <-> M_pE
M_pE -> M_p + E_p
K_p + P <-> K_pP
K_pP -> K + P"""

RKIP_REDUCED = """\
R + K <-> RK
RK + E_p -> R + K_p + E
E -> E_p
K_p -> K"""

# Y looks like an intermediate with y = y'; removing it breaks the loop property
SELF_LOOP_PAIR = """\
A + B <-> Y
A <-> B"""

# the same kind of removal splits the R-graph in two
SELF_LOOP_SPLIT = """\
A + B <-> Y
A <-> C
B <-> D"""


def processive_phosphorylation(n: int) -> str:
    """Sequential processive ``n``-site mechanism: the enzyme E stays bound across all sites."""
    if n < 1:
        raise ValueError("need at least one site")
    kinase = " <-> ".join(f"S{k}E" for k in range(n))
    phosphatase = " <-> ".join(f"S{k}F" for k in range(n, 0, -1))
    lines = []
    chain = ["S0 + E"] + kinase.split(" <-> ")
    for a, b in zip(chain, chain[1:]):
        lines.append(f"{a} <-> {b}")
    lines.append(f"{chain[-1]} -> S{n} + E")
    chain = [f"S{n} + F"] + phosphatase.split(" <-> ")
    for a, b in zip(chain, chain[1:]):
        lines.append(f"{a} <-> {b}")
    lines.append(f"{chain[-1]} -> S0 + F")
    return "\n".join(lines)


def phosphorelay_species(n: int, m: int) -> str:
    """Name of substrate ``m`` phosphorylated at site ``n`` (``n = 0``: unphosphorylated)."""
    return f"S{n}_{m}"


def phosphorelay(M: int, sites: int = 2) -> str:
    """Phosphorelay with ``M`` substrates of ``sites`` sites each, relaying through ``X_m``."""
    if M < 1 or sites < 1:
        raise ValueError("need at least one substrate and one site")
    s = phosphorelay_species
    lines = []
    for m in range(1, M + 1):
        for k in range(1, sites):
            lines.append(f"{s(k, m)} <-> {s(k + 1, m)}")
    for m in range(1, M):
        lines.append(f"{s(sites, m)} + {s(0, m + 1)} <-> X_{m}")
        lines.append(f"X_{m} -> {s(0, m)} + {s(1, m + 1)}")
    lines.append(f"{s(0, 1)} -> {s(1, 1)}")
    lines.append(f"{s(sites, M)} -> {s(0, M)}")
    return "\n".join(lines)
