"""Boundary and coboundary expansion over F2, the sweep cut, and the Cheeger-Buser report.

Expansion constants are exact rationals found by exhaustive search over the
quotient ``C_n / B_n``: both the numerator ``|d alpha|`` and the denominator
``|alpha + B_n|`` depend only on the class of ``alpha``, so it suffices to
visit one minimum-weight representative (coset leader) per class.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .complex import (
    AugmentedComplex,
    CWComplex,
    Cochain,
    augment_boundary,
    check_orientability,
    degrees,
    max_boundary_size,
    reorient,
)
from .errors import InapplicableError
from .linalg import DEFAULT_BUDGET, CosetCode, SearchBudget, pack_bits, unpack_bits, weight
from .spectral import smallest_nontrivial_eigenvalue

#: Absolute tolerance used when comparing floating eigenvalues with exact constants.
BOUND_TOL = 1e-8


@dataclass
class ExpansionCertificate:
    n: int
    variant: str
    h: Fraction
    witness: Cochain
    numerator: int
    denominator: int


def _masks_from_columns(mat: np.ndarray) -> list[int]:
    """Pack each column of an integer matrix mod 2 over its row index."""
    return [pack_bits(mat[:, j]) for j in range(mat.shape[1])]


def _search(n: int, variant: str, length: int, image_cols: list[int], trivial: list[int], budget) -> ExpansionCertificate:
    if length == 0:
        raise InapplicableError(f"dimension {n} has no cells")
    code = CosetCode(trivial, length)
    if code.redundancy == 0:
        raise InapplicableError(f"every {n}-cochain is trivial; the {variant} expansion is undefined")
    best = None  # (num, den, leader)
    for syn, leader in code.leaders(budget):
        if syn == 0:
            continue
        image = 0
        for i in range(length):
            if leader >> i & 1:
                image ^= image_cols[i]
        num, den = weight(image), weight(leader)
        # leaders arrive by increasing weight then lex support, so strict
        # improvement keeps the smaller-denominator, lex-first tie winner
        if best is None or num * best[1] < best[0] * den:
            best = (num, den, leader)
            if num == 0:
                break
    num, den, leader = best
    return ExpansionCertificate(n, variant, Fraction(num, den), Cochain(n, "F2", unpack_bits(leader, length)), num, den)


def _down(complex_: CWComplex, n: int, reduced: bool) -> np.ndarray:
    if n == 0:
        rows = 1 if reduced else 0
        return np.ones((rows, complex_.cell_counts[0]), dtype=np.int64)
    return np.array(complex_.inc(n))


def _check_dim(complex_: CWComplex, n: int):
    if not 0 <= n <= complex_.dim:
        raise ValueError(f"dimension {n} outside 0..{complex_.dim}")


def boundary_expansion(
    complex_: CWComplex, n: int, reduced: bool = False, budget: SearchBudget = DEFAULT_BUDGET
) -> ExpansionCertificate:
    """Exact ``h_n = min |d alpha| / |alpha + B_n|`` over F2 cochains outside ``B_n``."""
    _check_dim(complex_, n)
    down = np.mod(_down(complex_, n, reduced), 2)
    up = np.mod(complex_.inc(n + 1), 2)
    return _search(n, "boundary", complex_.cell_counts[n], _masks_from_columns(down), _masks_from_columns(up), budget)


def coboundary_expansion(
    complex_: CWComplex, n: int, reduced: bool = False, budget: SearchBudget = DEFAULT_BUDGET
) -> ExpansionCertificate:
    """Exact ``min |delta alpha| / |alpha + B^n|`` over F2 cochains outside ``B^n``.

    At n = 0 with ``reduced`` this is the Cheeger constant of the 1-skeleton.
    """
    _check_dim(complex_, n)
    down = np.mod(_down(complex_, n, reduced), 2)
    up = np.mod(complex_.inc(n + 1), 2)
    return _search(
        n, "coboundary", complex_.cell_counts[n], _masks_from_columns(up.T), _masks_from_columns(down.T), budget
    )


def expansion_ratio(complex_: CWComplex, n: int, alpha, variant: str = "boundary", reduced: bool = False) -> Fraction:
    """Re-evaluate a witness: image weight over coset weight, by direct search."""
    a = pack_bits(alpha.values if isinstance(alpha, Cochain) else alpha)
    down = np.mod(_down(complex_, n, reduced), 2)
    up = np.mod(complex_.inc(n + 1), 2)
    if variant == "boundary":
        image_cols, trivial = _masks_from_columns(down), _masks_from_columns(up)
    else:
        image_cols, trivial = _masks_from_columns(up.T), _masks_from_columns(down.T)
    image = 0
    for i, col in enumerate(image_cols):
        if a >> i & 1:
            image ^= col
    den, _ = CosetCode(trivial, complex_.cell_counts[n]).min_weight(a)
    if den == 0:
        raise ValueError("cochain lies in the trivial subspace")
    return Fraction(weight(image), den)


# --------------------------------------------------------------------------
# sweep


@dataclass
class SweepProfile:
    """Sweep of the d-cells by |f| through the boundary-doubled complex.

    ``order`` lists augmented-complex d-cell ids: the M virtual caps first,
    then the N real cells by ascending |f|.  Position ``p`` in ``order``
    corresponds to the index ``p + 1 - M`` so real cells sit at 1..N.
    ``crossing[i]`` is ``|C_i|`` for i = 0..N-1 and ``sigma[p]`` the signed
    adjacency count of the cell at position p.
    """

    order: list[int]
    num_virtual: int
    num_real: int
    crossing: list[int]
    sigma: list[int]
    H: Fraction
    argmin: int
    witness: Cochain
    m: int
    augmented: AugmentedComplex = field(repr=False)
    values: np.ndarray = field(repr=False, default=None)


def low_adjacency_pairs(complex_: CWComplex) -> list[tuple[int, int, int]]:
    """``(lam, kap, mu)`` for every pair of d-cells sharing the (d-1)-cell ``mu``.

    One entry per shared cell, so pairs sharing several cells repeat.
    """
    top = complex_.inc(complex_.dim)
    pairs = []
    for mu in range(top.shape[0]):
        cofaces = np.flatnonzero(top[mu])
        for a in range(len(cofaces)):
            for b in range(a + 1, len(cofaces)):
                pairs.append((int(cofaces[a]), int(cofaces[b]), mu))
    return pairs


def sweep(complex_: CWComplex, f) -> SweepProfile:
    """Order cells by |f|, form the crossing counts ``|C_i|`` and minimize ``|C_i| / (N - i)``."""
    d = complex_.dim
    if d < 1:
        raise ValueError("sweep needs d >= 1")
    if np.any(np.abs(complex_.inc(d)) > 1):
        raise ValueError("sweep needs top incidence numbers in {-1, 0, 1}")
    values = np.asarray(f.values if isinstance(f, Cochain) else f, dtype=float)
    N = complex_.cell_counts[d]
    if values.shape != (N,):
        raise ValueError(f"f has length {len(values)}, expected {N}")
    if N == 0:
        raise InapplicableError("no d-cells to sweep")
    signs = np.where(values < 0, -1, 1)
    aug = augment_boundary(reorient(complex_, d, signs))
    M = len(aug.virtual_top)
    mag = np.abs(values)
    real_order = sorted(range(N), key=lambda lam: (mag[lam], lam))
    order = list(aug.virtual_top) + real_order
    position = {cell: p for p, cell in enumerate(order)}

    sigma = [0] * (M + N)
    for lam, kap, _ in low_adjacency_pairs(aug.augmented):
        lo, hi = sorted((position[lam], position[kap]))
        sigma[hi] += 1  # partner below
        sigma[lo] -= 1  # partner above
    # telescoping: |C_i| = |C_{i-1}| - sigma_i, starting from nothing below the cut
    running = 0
    sizes = []
    for p in range(M + N):
        running -= sigma[p]
        sizes.append(running)
    if sizes[-1] != 0:
        raise AssertionError("telescoping sum did not close")
    crossing = sizes[M - 1 : M + N - 1] if M else [0] + sizes[: N - 1]

    best_i = min(range(N), key=lambda i: (Fraction(crossing[i], N - i), i))
    H = Fraction(crossing[best_i], N - best_i)
    witness = np.zeros(N, dtype=np.uint8)
    for lam in real_order[best_i:]:
        witness[lam] = 1
    return SweepProfile(
        order=order,
        num_virtual=M,
        num_real=N,
        crossing=crossing,
        sigma=sigma,
        H=H,
        argmin=best_i,
        witness=Cochain(d, "F2", witness),
        m=max_boundary_size(complex_),
        augmented=aug,
        values=mag,
    )


def crossing_counts_direct(profile: SweepProfile) -> list[int]:
    """``|C_i|`` recounted from the definition (pairs j <= i < k), for cross-checks."""
    M = profile.num_virtual
    position = {cell: p for p, cell in enumerate(profile.order)}
    pairs = low_adjacency_pairs(profile.augmented.augmented)
    out = []
    for i in range(profile.num_real):
        cut = M + i - 1  # positions <= cut hold the cells of index <= i
        out.append(sum(1 for a, b, _ in pairs if min(position[a], position[b]) <= cut < max(position[a], position[b])))
    return out


# --------------------------------------------------------------------------
# Cheeger-Buser report


@dataclass
class BoundVerdict:
    applicable: bool
    holds: bool
    lhs: float
    rhs: float
    slack: float
    failed_hypothesis: str | None = None

    @property
    def status(self) -> str:
        if not self.applicable:
            return "N/A"
        return "HOLDS" if self.holds else "FAILS"


@dataclass
class CheegerReport:
    d: int
    regular_asserted: bool
    incidence_pm1: bool
    orientable: bool
    max_low_degree: int
    lambda_d: float
    lambda_is_zero: bool
    h_d: Fraction
    certificate: ExpansionCertificate
    m: int
    lower: BoundVerdict
    upper: BoundVerdict
    sweep: SweepProfile | None = None
    eigenvector: Cochain | None = None

    @property
    def degree_at_most_2(self) -> bool:
        return self.max_low_degree <= 2


def _verdict(lhs: float, rhs: float, required: list[tuple[str, bool]]) -> BoundVerdict:
    failed = next((name for name, ok in required if not ok), None)
    return BoundVerdict(failed is None, lhs <= rhs + BOUND_TOL, lhs, rhs, rhs - lhs, failed)


def cheeger_check(complex_: CWComplex, reduced: bool = False, budget: SearchBudget = DEFAULT_BUDGET) -> CheegerReport:
    """Evaluate ``lambda_d <= h_d <= sqrt(2 m lambda_d)`` and the hypotheses of each side."""
    d = complex_.dim
    if d < 1:
        raise ValueError("cheeger_check needs d >= 1")
    pm1 = all(not np.any(np.abs(a) > 1) for a in complex_.incidence)
    top_pm1 = not np.any(np.abs(complex_.inc(d)) > 1)
    orientable = top_pm1 and check_orientability(complex_).orientable
    low_deg = degrees(complex_, d - 1)
    max_low_degree = int(low_deg.max()) if len(low_deg) else 0

    spec = smallest_nontrivial_eigenvalue(complex_, d, "lower", reduced)
    lam = spec.value
    cert = boundary_expansion(complex_, d, reduced, budget)
    m = max_boundary_size(complex_)
    upper_rhs = math.sqrt(2 * m * max(lam, 0.0))
    regular = complex_.regular_asserted
    lower = _verdict(lam, float(cert.h), [("regular", regular), ("incidence_pm1", pm1), ("orientable", orientable)])
    upper = _verdict(
        float(cert.h), upper_rhs, [("regular", regular), ("incidence_pm1", pm1), ("max_degree_le_2", max_low_degree <= 2)]
    )
    profile = sweep(complex_, spec.vector) if top_pm1 else None
    return CheegerReport(
        d=d,
        regular_asserted=regular,
        incidence_pm1=pm1,
        orientable=orientable,
        max_low_degree=max_low_degree,
        lambda_d=lam,
        lambda_is_zero=spec.is_zero,
        h_d=cert.h,
        certificate=cert,
        m=m,
        lower=lower,
        upper=upper,
        sweep=profile,
        eigenvector=spec.vector,
    )


# --------------------------------------------------------------------------
# tree formula


def _graph(complex_: CWComplex) -> list[list[int]]:
    inc = complex_.inc(1)
    adj: list[list[int]] = [[] for _ in range(complex_.cell_counts[0])]
    for e in range(inc.shape[1]):
        ends = np.flatnonzero(inc[:, e])
        if len(ends) == 0:
            continue  # loop
        if len(ends) != 2 or inc[ends[0], e] + inc[ends[1], e] != 0 or abs(inc[ends[0], e]) != 1:
            raise ValueError(f"edge {e} does not have two endpoints")
        u, v = (int(x) for x in ends)
        adj[u].append(v)
        adj[v].append(u)
    return adj


def _bfs(adj: list[list[int]], src: int) -> list[int]:
    dist = [-1] * len(adj)
    dist[src] = 0
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def tree_expansion_oracle(complex_: CWComplex) -> Fraction:
    """``2 / diam`` for a tree, 0 for any other connected graph."""
    if complex_.dim != 1:
        raise ValueError("tree_expansion_oracle needs a 1-dimensional complex")
    adj = _graph(complex_)
    if not adj or any(x < 0 for x in _bfs(adj, 0)):
        raise ValueError("graph is empty or disconnected; diameter undefined")
    c0, c1 = complex_.cell_counts
    if c1 != c0 - 1:
        return Fraction(0)
    if c1 == 0:
        raise ValueError("a single vertex has no edges to expand")
    diam = max(max(_bfs(adj, s)) for s in range(c0))
    return Fraction(2, diam)
