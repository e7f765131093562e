"""Exact rational linear algebra and linear programming.

Everything here works over :class:`fractions.Fraction`, so certificates
re-check with exact equality. Matrices are plain sequences of rows; a
:class:`~crnreduce.model.StoichMatrix` can be passed wherever a matrix is
expected.

The LP solver is a dense two-phase simplex with Bland's rule. It is meant
for desk-scale problems (a few hundred variables at most).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import DimensionMismatch, TooLarge
from .model import HypothesisResult

Vector = tuple[Fraction, ...]
Matrix = Sequence[Sequence[Fraction]]

ZERO = Fraction(0)
ONE = Fraction(1)


def _ncols(M: Matrix, ncols: int | None) -> int:
    if ncols is not None:
        return ncols
    if len(M) == 0:
        raise DimensionMismatch("column count of an empty matrix is ambiguous; pass ncols")
    return len(M[0])


def mat_vec(M: Matrix, v: Sequence[Fraction]) -> Vector:
    return tuple(sum((a * x for a, x in zip(row, v) if a), ZERO) for row in M)


def transpose(M: Matrix, ncols: int | None = None) -> list[list[Fraction]]:
    m = _ncols(M, ncols)
    return [[row[j] for row in M] for j in range(m)]


def rref(M: Matrix, ncols: int | None = None) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns the nonzero rows and the pivot columns."""
    m = _ncols(M, ncols)
    rows = [[x if type(x) is Fraction else Fraction(x) for x in row] for row in M]
    pivots: list[int] = []
    r = 0
    for c in range(m):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        nz = [k for k in range(m) if rows[r][k] != 0]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                row_i = rows[i]
                for k in nz:
                    row_i[k] -= f * rows[r][k]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(M: Matrix, ncols: int | None = None) -> int:
    return len(rref(M, ncols)[1])


def rational_kernel_basis(M: Matrix, ncols: int | None = None) -> list[Vector]:
    """Basis of ``{v : M v = 0}`` read off the reduced row echelon form.

    One basis vector per free column, with a 1 in that column, so the
    vectors are independent by construction.
    """
    m = _ncols(M, ncols)
    rows, pivots = rref(M, m)
    free = [c for c in range(m) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [ZERO] * m
        v[f] = ONE
        for row, p in zip(rows, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def primitive_integer(v: Sequence[Fraction]) -> Vector:
    """Scale ``v`` to the integer vector with coprime entries (sign kept)."""
    lcm = 1
    for x in v:
        lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    g = g or 1
    return tuple(Fraction(x // g) for x in ints)


# -- linear programming ----------------------------------------------------

@dataclass
class LinearProgram:
    """``opt objective.x`` subject to ``a_eq x = b_eq`` and ``lower <= x <= upper``.

    ``None`` in ``lower``/``upper`` means unbounded in that direction. With
    ``objective=None`` the problem is a pure feasibility question.
    """

    a_eq: Matrix
    b_eq: Sequence[Fraction]
    lower: Sequence[Optional[Fraction]]
    upper: Sequence[Optional[Fraction]]
    objective: Optional[Sequence[Fraction]] = None
    maximize: bool = True

    @property
    def n_vars(self) -> int:
        return len(self.lower)

    def __post_init__(self) -> None:
        n = len(self.lower)
        if len(self.upper) != n:
            raise DimensionMismatch("lower and upper bounds differ in length")
        if len(self.a_eq) != len(self.b_eq):
            raise DimensionMismatch("a_eq and b_eq differ in row count")
        if any(len(row) != n for row in self.a_eq):
            raise DimensionMismatch("a_eq rows must have one entry per variable")
        if self.objective is not None and len(self.objective) != n:
            raise DimensionMismatch("objective must have one entry per variable")

    def is_feasible_point(self, x: Sequence[Fraction]) -> bool:
        if len(x) != self.n_vars:
            return False
        if mat_vec(self.a_eq, x) != tuple(Fraction(b) for b in self.b_eq):
            return False
        for xi, lo, up in zip(x, self.lower, self.upper):
            if lo is not None and xi < lo:
                return False
            if up is not None and xi > up:
                return False
        return True


@dataclass
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: Optional[Vector] = None
    objective: Optional[Fraction] = None

    @property
    def feasible(self) -> bool:
        return self.status == "optimal"


class _Tableau:
    """Simplex tableau over Fractions; rows carry the rhs in the last slot."""

    def __init__(self, rows: list[list[Fraction]], basis: list[int], ncols: int):
        self.rows = rows
        self.basis = basis
        self.ncols = ncols
        self.obj: list[Fraction] = [ZERO] * (ncols + 1)

    def set_cost(self, cost: Sequence[Fraction]) -> None:
        obj = [Fraction(c) for c in cost] + [ZERO]
        for i, b in enumerate(self.basis):
            cb = obj[b]
            if cb:
                row = self.rows[i]
                for k, x in enumerate(row):
                    if x:
                        obj[k] -= cb * x
        self.obj = obj

    def pivot(self, r: int, c: int) -> None:
        prow = self.rows[r]
        inv = 1 / prow[c]
        if inv != 1:
            prow = [x * inv for x in prow]
            self.rows[r] = prow
        nz = [k for k, x in enumerate(prow) if x]
        for i, row in enumerate(self.rows):
            if i != r:
                f = row[c]
                if f:
                    for k in nz:
                        row[k] -= f * prow[k]
        f = self.obj[c]
        if f:
            for k in nz:
                self.obj[k] -= f * prow[k]
        self.basis[r] = c

    def run(self, allowed: int) -> str:
        """Minimise with Bland's rule over columns ``< allowed``."""
        while True:
            entering = next((j for j in range(allowed) if self.obj[j] < 0), None)
            if entering is None:
                return "optimal"
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    ratio = row[-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded"
            self.pivot(best[1], entering)

    def solution(self) -> list[Fraction]:
        y = [ZERO] * self.ncols
        for i, b in enumerate(self.basis):
            if b < self.ncols:
                y[b] = self.rows[i][-1]
        return y


def _solve_standard(A: list[list[Fraction]], b: list[Fraction], cost: list[Fraction]) -> tuple[str, list[Fraction] | None]:
    """Minimise ``cost.y`` subject to ``A y = b``, ``y >= 0``."""
    nvar = len(cost)
    rows, pivots = rref([row + [bi] for row, bi in zip(A, b)], nvar + 1)
    if pivots and pivots[-1] == nvar:
        return "infeasible", None  # a row reads 0 = nonzero
    # Rows with a nonnegative rhs start with their pivot column basic; the
    # others get an artificial variable after negation.
    basis: list[int] = []
    n_art = 0
    for i, p in enumerate(pivots):
        if rows[i][-1] < 0:
            rows[i] = [-x for x in rows[i]]
            basis.append(nvar + n_art)
            n_art += 1
        else:
            basis.append(p)
    width = nvar + n_art
    full = []
    art = 0
    for i, row in enumerate(rows):
        ext = [ZERO] * n_art
        if basis[i] >= nvar:
            ext[art] = ONE
            art += 1
        full.append(row[:nvar] + ext + [row[-1]])
    tab = _Tableau(full, basis, width)
    if n_art:
        tab.set_cost([ZERO] * nvar + [ONE] * n_art)
        tab.run(width)
        if -tab.obj[-1] != 0:
            return "infeasible", None
        for i in range(len(tab.rows) - 1, -1, -1):
            if tab.basis[i] >= nvar:
                col = next((j for j in range(nvar) if tab.rows[i][j] != 0), None)
                if col is None:
                    del tab.rows[i]
                    del tab.basis[i]
                else:
                    tab.pivot(i, col)
        for i, row in enumerate(tab.rows):
            tab.rows[i] = row[:nvar] + [row[-1]]
        tab.ncols = nvar
        tab.obj = tab.obj[:nvar] + [tab.obj[-1]]
    tab.set_cost(cost)
    status = tab.run(nvar)
    if status == "unbounded":
        return "unbounded", None
    return "optimal", tab.solution()


def solve_lp(lp: LinearProgram) -> LPResult:
    """Solve ``lp`` exactly.

    Bounded variables are shifted to ``y >= 0``, doubly bounded ones get a
    slack row, and free variables are split into positive and negative
    parts. The returned point always re-substitutes exactly.
    """
    n = lp.n_vars
    cols: list[list[tuple[int, Fraction]]] = []  # x_i = offset_i + sum coef * y_t
    offsets: list[Fraction] = []
    ny = 0
    extra_rows: list[tuple[list[tuple[int, Fraction]], Fraction]] = []
    for i in range(n):
        lo, up = lp.lower[i], lp.upper[i]
        lo = None if lo is None else Fraction(lo)
        up = None if up is None else Fraction(up)
        if lo is not None and up is not None and lo > up:
            return LPResult("infeasible")
        if lo is not None:
            offsets.append(lo)
            cols.append([(ny, ONE)])
            if up is not None:
                extra_rows.append(([(ny, ONE), (ny + 1, ONE)], up - lo))
                ny += 2
            else:
                ny += 1
        elif up is not None:
            offsets.append(up)
            cols.append([(ny, -ONE)])
            ny += 1
        else:
            offsets.append(ZERO)
            cols.append([(ny, ONE), (ny + 1, -ONE)])
            ny += 2

    A: list[list[Fraction]] = []
    b: list[Fraction] = []
    for row, rhs in zip(lp.a_eq, lp.b_eq):
        new = [ZERO] * ny
        shift = Fraction(rhs)
        for i, a in enumerate(row):
            if a:
                a = Fraction(a)
                shift -= a * offsets[i]
                for t, coef in cols[i]:
                    new[t] += a * coef
        A.append(new)
        b.append(shift)
    for terms, rhs in extra_rows:
        new = [ZERO] * ny
        for t, coef in terms:
            new[t] = coef
        A.append(new)
        b.append(rhs)

    cost = [ZERO] * ny
    if lp.objective is not None:
        sign = -1 if lp.maximize else 1
        for i, c in enumerate(lp.objective):
            if c:
                for t, coef in cols[i]:
                    cost[t] += sign * Fraction(c) * coef

    status, y = _solve_standard(A, b, cost)
    if status != "optimal":
        return LPResult(status)
    x = tuple(offsets[i] + sum((coef * y[t] for t, coef in cols[i]), ZERO) for i in range(n))
    if not lp.is_feasible_point(x):  # pragma: no cover - would be a solver bug
        raise AssertionError("simplex returned a point violating the constraints")
    obj = None
    if lp.objective is not None:
        obj = sum((Fraction(c) * xi for c, xi in zip(lp.objective, x)), ZERO)
    return LPResult("optimal", x, obj)


# -- hypotheses (G3)/(G4) --------------------------------------------------

def check_conservative(N: Matrix, ncols: int | None = None) -> HypothesisResult:
    """Look for a conservation law ``c`` with ``N^T c = 0`` and every ``c_i >= 1``."""
    n = len(N)
    Nt = transpose(N, ncols)
    lp = LinearProgram(Nt, [ZERO] * len(Nt), [ONE] * n, [None] * n)
    res = solve_lp(lp)
    if res.feasible:
        return HypothesisResult(True, [], res.x)
    return HypothesisResult(False, ["no strictly positive conservation law"])


def check_consistent(N: Matrix, irreversible: Iterable[int], ncols: int | None = None) -> HypothesisResult:
    """Look for ``v`` in ker N with ``v_j >= 1`` on irreversible reactions (others free)."""
    m = _ncols(N, ncols)
    irr = set(irreversible)
    lower = [ONE if j in irr else None for j in range(m)]
    lp = LinearProgram([list(r) for r in N], [ZERO] * len(N), lower, [None] * m)
    res = solve_lp(lp)
    if res.feasible:
        return HypothesisResult(True, [], res.x)
    return HypothesisResult(False, ["no kernel vector positive on all irreversible reactions"])


# -- kernel / orthant classification ---------------------------------------

class OrthantClass(str, Enum):
    P1 = "P1"  # ker N meets the orthant only at the origin
    P2 = "P2"  # ker N meets the interior of the orthant
    NEITHER = "Neither"


@dataclass
class KernelOrthantClass:
    """Classification of ``ker N`` against the orthant ``{x : sigma_i x_i >= 0}``.

    Certificates:

    * ``P2``: ``vector`` with ``N v = 0`` and ``sigma_i v_i >= 1``.
    * ``P1``: ``vector`` is a Gordan multiplier ``y`` with
      ``sigma_j (N^T y)_j >= 1`` for every reaction, which rules out any
      nonzero kernel vector in the orthant; ``box_optimum`` is the zero
      optimum of the box LP.
    * ``Neither``: ``vector`` is a nonzero kernel vector on the boundary
      of the orthant.
    """

    kind: OrthantClass
    vector: Vector
    box_optimum: Optional[Fraction] = None

    def verify(self, N: Matrix, sigma: Sequence[int], ncols: int | None = None) -> bool:
        return verify_orthant_certificate(N, sigma, self, ncols)


def _check_sigma(N: Matrix, sigma: Sequence[int], ncols: int | None) -> int:
    m = _ncols(N, ncols)
    if len(sigma) != m:
        raise DimensionMismatch(f"sign pattern has {len(sigma)} entries for {m} reactions")
    if any(s not in (1, -1) for s in sigma):
        raise ValueError("sign pattern entries must be +1 or -1")
    return m


def classify_kernel_orthant(N: Matrix, sigma: Sequence[int], ncols: int | None = None) -> KernelOrthantClass:
    m = _check_sigma(N, sigma, ncols)
    rows = [list(r) for r in N]
    zeros = [ZERO] * len(rows)

    interior = LinearProgram(
        rows, zeros,
        [ONE if s > 0 else None for s in sigma],
        [None if s > 0 else -ONE for s in sigma],
    )
    res = solve_lp(interior)
    if res.feasible:
        return KernelOrthantClass(OrthantClass.P2, res.x)

    # Any nonzero kernel point of the orthant scales into the unit box with a
    # positive objective, so a zero optimum means ker N and K meet only at 0.
    signed = [[a * s for a, s in zip(row, sigma)] for row in rows]
    box = LinearProgram(signed, zeros, [ZERO] * m, [ONE] * m, [ONE] * m, maximize=True)
    res = solve_lp(box)
    assert res.feasible  # w = 0 is always feasible and the box is bounded
    if res.objective == 0:
        y = _gordan_multiplier(transpose(rows, m), sigma, len(rows))
        return KernelOrthantClass(OrthantClass.P1, y, res.objective)
    v = tuple(w * s for w, s in zip(res.x, sigma))
    return KernelOrthantClass(OrthantClass.NEITHER, v, res.objective)


def _gordan_multiplier(Nt: list[list[Fraction]], sigma: Sequence[int], n: int) -> Vector:
    """Find ``y`` with ``sigma_j (N^T y)_j >= 1`` using slack variables ``s_j >= 0``."""
    m = len(Nt)
    # variables: y (free, n) then s (m, >= 0); rows: sigma_j (N^T y)_j - s_j = 1
    a_eq = []
    for j, row in enumerate(Nt):
        slack = [ZERO] * m
        slack[j] = -ONE
        a_eq.append([sigma[j] * a for a in row] + slack)
    lp = LinearProgram(a_eq, [ONE] * m, [None] * n + [ZERO] * m, [None] * (n + m))
    res = solve_lp(lp)
    if not res.feasible:  # pragma: no cover - contradicts Gordan's alternative
        raise AssertionError("box LP optimum is zero but no separating multiplier exists")
    return res.x[:n]


def verify_orthant_certificate(
    N: Matrix, sigma: Sequence[int], result: KernelOrthantClass, ncols: int | None = None
) -> bool:
    """Re-check a classification certificate with exact arithmetic."""
    m = _check_sigma(N, sigma, ncols)
    v = result.vector
    if result.kind is OrthantClass.P1:
        Nt = transpose(N, m)
        return len(v) == len(N) and all(s * t >= 1 for s, t in zip(sigma, mat_vec(Nt, v)))
    if len(v) != m or any(mat_vec(N, v)):
        return False
    if result.kind is OrthantClass.P2:
        return all(s * x >= 1 for s, x in zip(sigma, v))
    signed = [s * x for s, x in zip(sigma, v)]
    return all(x >= 0 for x in signed) and any(x > 0 for x in signed) and any(x == 0 for x in signed)


# -- minimal-support conservation vectors (brute force oracle) -------------

def minimal_support_conservation_vectors(
    N: Matrix, max_n: int = 12, ncols: int | None = None
) -> list[Vector]:
    """Generators of the extreme rays of ``{w >= 0 : N^T w = 0}`` by brute force.

    Supports are enumerated by increasing size, skipping supersets of
    supports already found. A support ``S`` is minimal exactly when the
    conservation laws vanishing outside ``S`` form a line spanned by a vector
    that is nonzero with one sign on all of ``S``. Each generator is returned
    as a primitive nonnegative integer vector.
    """
    n = len(N)
    if n > max_n:
        raise TooLarge(f"{n} species exceed the brute-force bound {max_n}")
    m = _ncols(N, ncols) if n else 0
    found: list[frozenset[int]] = []
    out: list[Vector] = []
    for size in range(1, n + 1):
        for support in itertools.combinations(range(n), size):
            s = frozenset(support)
            if any(f <= s for f in found):
                continue
            # rows of N^T restricted to the support columns: w_S^T N_S = 0
            sub = [[N[i][j] for i in support] for j in range(m)]
            basis = rational_kernel_basis(sub, size)
            if len(basis) != 1:
                continue
            w = basis[0]
            if all(x > 0 for x in w) or all(x < 0 for x in w):
                w = primitive_integer(w)
                if w[0] < 0:
                    w = tuple(-x for x in w)
                full = [ZERO] * n
                for i, x in zip(support, w):
                    full[i] = x
                found.append(s)
                out.append(tuple(full))
    return out
