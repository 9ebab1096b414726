"""Exact and numerical linear algebra kernels.

F2 vectors are bit-packed into Python ints (bit ``i`` is coordinate ``i``).
Rational work uses :class:`fractions.Fraction` and plain ints, so nothing
here can silently overflow.  The eigensolver is a cyclic Jacobi method.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import BudgetExceeded

#: Eigenvalues below ``ZERO_REL * max(1, ||A||_F)`` are classified as zero.
ZERO_REL = 1e-9


@dataclass(frozen=True)
class SearchBudget:
    """Work caps for exact F2 searches.

    ``span_bits`` bounds brute enumeration of a span (2**k elements) and
    ``syndrome_bits`` bounds coset-leader tables (2**(L-k) syndromes).
    """

    span_bits: int = 20
    syndrome_bits: int = 24


DEFAULT_BUDGET = SearchBudget()


# --------------------------------------------------------------------------
# F2


def pack_bits(vec: Iterable[int]) -> int:
    """Pack a 0/1 sequence into an int, coordinate ``i`` -> bit ``i``."""
    out = 0
    for i, x in enumerate(vec):
        if int(x) & 1:
            out |= 1 << i
    return out


def unpack_bits(mask: int, length: int) -> np.ndarray:
    return np.array([(mask >> i) & 1 for i in range(length)], dtype=np.uint8)


def support(mask: int) -> tuple[int, ...]:
    """Sorted coordinates of the set bits."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def weight(mask: int) -> int:
    return bin(mask).count("1")


@dataclass
class F2Matrix:
    """Dense F2 matrix stored as one packed int per row."""

    rows: int
    cols: int
    data: list[int] = field(default_factory=list)

    def __post_init__(self):
        if len(self.data) != self.rows:
            raise ValueError(f"expected {self.rows} packed rows, got {len(self.data)}")
        limit = 1 << self.cols
        for r, word in enumerate(self.data):
            if word < 0 or word >= limit:
                raise ValueError(f"row {r} has bits outside {self.cols} columns")

    @classmethod
    def from_array(cls, a) -> "F2Matrix":
        a = np.asarray(a)
        if a.ndim != 2:
            raise ValueError("F2Matrix needs a 2-d array")
        a = np.mod(a.astype(np.int64), 2)
        return cls(a.shape[0], a.shape[1], [pack_bits(row) for row in a])

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for r, word in enumerate(self.data):
            out[r] = unpack_bits(word, self.cols)
        return out

    def column_masks(self) -> list[int]:
        """Each column packed over the row index."""
        cols = [0] * self.cols
        for r, word in enumerate(self.data):
            for c in support(word):
                cols[c] |= 1 << r
        return cols

    def transpose(self) -> "F2Matrix":
        return F2Matrix(self.cols, self.rows, self.column_masks())

    def apply(self, vec_mask: int) -> int:
        """Matrix-vector product; input packed over columns, output over rows."""
        out = 0
        for r, word in enumerate(self.data):
            if weight(word & vec_mask) & 1:
                out |= 1 << r
        return out


def _rref(rows: Sequence[int], ncols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form over F2, pivoting on the lowest column index."""
    work = [r for r in rows if r]
    pivots: list[int] = []
    reduced: list[int] = []
    for col in range(ncols):
        bit = 1 << col
        idx = next((i for i, r in enumerate(work) if r & bit), None)
        if idx is None:
            continue
        prow = work.pop(idx)
        work = [r ^ prow if r & bit else r for r in work]
        reduced = [r ^ prow if r & bit else r for r in reduced]
        reduced.append(prow)
        pivots.append(col)
        work = [r for r in work if r]
    return reduced, pivots


def f2_span_basis(vectors: Iterable[int], length: int) -> list[int]:
    """A reduced basis of the span of packed vectors of the given length."""
    basis, _ = _rref(list(vectors), length)
    return basis


def f2_rank_nullspace(M) -> tuple[int, list[np.ndarray]]:
    """Rank and a nullspace basis of an F2 matrix.

    Each basis vector has a single free coordinate set, so the basis is
    independent and deterministic.
    """
    if not isinstance(M, F2Matrix):
        M = F2Matrix.from_array(M)
    reduced, pivots = _rref(M.data, M.cols)
    pivot_set = set(pivots)
    null = []
    for free in range(M.cols):
        if free in pivot_set:
            continue
        v = 1 << free
        for prow, pcol in zip(reduced, pivots):
            if prow >> free & 1:
                v |= 1 << pcol
        null.append(unpack_bits(v, M.cols))
    return len(pivots), null


def f2_rank(M) -> int:
    if not isinstance(M, F2Matrix):
        M = F2Matrix.from_array(M)
    return len(_rref(M.data, M.cols)[1])


def _lex_less(a: int, b: int) -> bool:
    """Is support(a) lexicographically smaller than support(b)?"""
    diff = a ^ b
    if not diff:
        return False
    low = diff & -diff
    # the lowest differing coordinate belongs to the lex-smaller support
    return bool(a & low)


class CosetCode:
    """A binary linear code ``span(B)`` inside F2^L with coset-leader search.

    Cosets of the code are labelled by syndromes against a parity-check
    basis of the dual code.
    """

    def __init__(self, generators: Iterable[int], length: int):
        self.length = length
        self.basis = f2_span_basis(generators, length)
        self.dim = len(self.basis)
        # parity checks: nullspace of the generator matrix
        gen = F2Matrix(self.dim, length, list(self.basis))
        _, checks = f2_rank_nullspace(gen)
        self.checks = [pack_bits(h) for h in checks]
        self.redundancy = len(self.checks)
        self._col_syndrome = [
            sum(1 << j for j, h in enumerate(self.checks) if h >> i & 1) for i in range(length)
        ]

    def syndrome(self, v: int) -> int:
        s = 0
        for j, h in enumerate(self.checks):
            if weight(h & v) & 1:
                s |= 1 << j
        return s

    def contains(self, v: int) -> bool:
        return self.syndrome(v) == 0

    def _enumerate_span(self) -> Iterator[int]:
        # Gray-code walk over all 2**k codewords
        g = 0
        yield g
        for i in range(1, 1 << self.dim):
            flip = (i & -i).bit_length() - 1
            g ^= self.basis[flip]
            yield g

    def leaders(self, budget: SearchBudget = DEFAULT_BUDGET) -> Iterator[tuple[int, int]]:
        """Yield ``(syndrome, leader)`` for every coset, lightest first.

        Vectors are visited by increasing weight and, within a weight, in
        lexicographic order of their support, so the first hit of each
        syndrome is its minimum-weight, lex-smallest representative.
        """
        if self.redundancy > budget.syndrome_bits:
            raise BudgetExceeded(
                f"coset table needs 2^{self.redundancy} syndromes "
                f"(budget 2^{budget.syndrome_bits})"
            )
        total = 1 << self.redundancy
        seen = bytearray(total)
        found = 0
        cs = self._col_syndrome
        for w in range(self.length + 1):
            for combo in combinations(range(self.length), w):
                s = 0
                for i in combo:
                    s ^= cs[i]
                if seen[s]:
                    continue
                seen[s] = 1
                found += 1
                yield s, sum(1 << i for i in combo)
                if found == total:
                    return

    def min_weight(self, v: int, budget: SearchBudget = DEFAULT_BUDGET) -> tuple[int, int]:
        """Minimum Hamming weight of ``v + span`` and its lex-smallest minimizer."""
        if self.dim <= budget.span_bits:
            best = None
            for g in self._enumerate_span():
                cand = v ^ g
                if best is None:
                    best = cand
                    continue
                wc, wb = weight(cand), weight(best)
                if wc < wb or (wc == wb and _lex_less(cand, best)):
                    best = cand
            return weight(best), best
        if self.redundancy <= budget.syndrome_bits:
            target = self.syndrome(v)
            for s, leader in self.leaders(budget):
                if s == target:
                    return weight(leader), leader
        raise BudgetExceeded(
            f"span dimension {self.dim} > {budget.span_bits} and "
            f"redundancy {self.redundancy} > {budget.syndrome_bits}"
        )


def f2_coset_min_weight(B, v, budget: SearchBudget = DEFAULT_BUDGET) -> tuple[int, np.ndarray]:
    """Minimum weight over ``v + span(B)`` with a lex-smallest minimizer.

    ``B`` is a sequence of 0/1 vectors of the common length of ``v``.
    """
    v = np.asarray(v)
    length = len(v)
    gens = []
    for b in B:
        b = np.asarray(b)
        if len(b) != length:
            raise ValueError("all vectors must share one length")
        gens.append(pack_bits(b))
    code = CosetCode(gens, length)
    w, best = code.min_weight(pack_bits(v), budget)
    return w, unpack_bits(best, length)


# --------------------------------------------------------------------------
# exact rationals


def _as_fraction_rows(M) -> list[list[Fraction]]:
    if isinstance(M, np.ndarray):
        M = M.tolist()
    return [[Fraction(x) for x in row] for row in M]


def rational_rank(M) -> int:
    """Exact rank by fraction-free Bareiss elimination.

    Rows with rational entries are scaled by the lcm of their denominators
    first, which does not change the rank.
    """
    rows = []
    for row in _as_fraction_rows(M):
        den = 1
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
        rows.append([int(x * den) for x in row])
    if not rows:
        return 0
    ncols = len(rows[0])
    nrows = len(rows)
    rank = 0
    prev = 1
    for col in range(ncols):
        if rank == nrows:
            break
        piv = next((r for r in range(rank, nrows) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank][col]
        for r in range(rank + 1, nrows):
            a = rows[r][col]
            rows[r] = [(p * rows[r][j] - a * rows[rank][j]) // prev for j in range(ncols)]
        prev = p
        rank += 1
    return rank


def rational_rref(M) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q and its pivot columns."""
    rows = _as_fraction_rows(M)
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][col]
        rows[r] = [x / p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                a = rows[i][col]
                rows[i] = [x - a * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rational_nullspace(M, ncols: int | None = None) -> list[list[Fraction]]:
    """Exact basis of ``{x : M x = 0}``; one vector per free column."""
    rows, pivots = rational_rref(M)
    if ncols is None:
        ncols = len(M[0]) if len(M) else 0
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for row, pcol in zip(rows, pivots):
            v[pcol] = -row[free]
        basis.append(v)
    return basis


def rational_column_basis(M) -> list[list[Fraction]]:
    """Independent columns of ``M`` (the pivot columns) spanning its image."""
    rows = _as_fraction_rows(M)
    if not rows:
        return []
    _, pivots = rational_rref(rows)
    return [[row[c] for row in rows] for c in pivots]


def orthonormal_basis(vectors: Sequence[Sequence[Fraction]], length: int) -> np.ndarray:
    """Exact Gram-Schmidt on independent rational vectors, then normalize.

    Returns a ``length x k`` float matrix with orthonormal columns.  The
    orthogonalization is exact; only the final scaling is floating point.
    """
    ortho: list[list[Fraction]] = []
    norms: list[Fraction] = []
    for v in vectors:
        w = list(v)
        for u, nu in zip(ortho, norms):
            c = sum(a * b for a, b in zip(w, u)) / nu
            if c:
                w = [a - c * b for a, b in zip(w, u)]
        nw = sum(a * a for a in w)
        if nw == 0:
            raise ValueError("vectors are linearly dependent")
        ortho.append(w)
        norms.append(nw)
    Q = np.zeros((length, len(ortho)))
    for j, (w, nw) in enumerate(zip(ortho, norms)):
        Q[:, j] = np.array([float(a) for a in w]) / math.sqrt(nw)
    return Q


# --------------------------------------------------------------------------
# symmetric eigenproblem


@dataclass
class EigenResult:
    values: np.ndarray
    vectors: np.ndarray
    residual: float
    sweeps: int


def zero_threshold(A) -> float:
    return ZERO_REL * max(1.0, float(np.linalg.norm(A)))


def sym_eigen(A, tol: float = 1e-10, max_sweeps: int = 100) -> EigenResult:
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Sweeps run in fixed row-major (p, q) order until the largest
    off-diagonal entry is at most ``tol * ||A||_F``.
    """
    A0 = np.array(A, dtype=float)
    if A0.ndim != 2 or A0.shape[0] != A0.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A0.shape}")
    if not np.all(np.isfinite(A0)):
        raise ValueError("matrix has non-finite entries")
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = A0.shape[0]
    fro = float(np.linalg.norm(A0))
    if n and np.max(np.abs(A0 - A0.T)) > 1e-12 * max(1.0, fro):
        raise ValueError("matrix is not symmetric")
    a = (A0 + A0.T) / 2
    V = np.eye(n)
    thresh = tol * fro
    sweeps = 0
    while n > 1:
        off = np.abs(a - np.diag(np.diag(a))).max()
        if off <= thresh:
            break
        if sweeps >= max_sweeps:
            raise RuntimeError(f"Jacobi did not converge in {max_sweeps} sweeps")
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 1.0 / (2.0 * theta)
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
        sweeps += 1
    vals = np.diag(a).copy()
    order = np.argsort(vals, kind="stable")
    vals = vals[order]
    V = V[:, order]
    residual = 0.0
    if n:
        residual = float(np.max(np.linalg.norm(A0 @ V - V * vals, axis=0)))
    return EigenResult(vals, V, residual, sweeps)
