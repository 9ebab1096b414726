"""Combinatorial CW complexes: cell counts plus integer incidence matrices.

``incidence[n - 1]`` is the matrix ``I_n`` of shape ``(c_{n-1}, c_n)`` whose
entry ``[mu, lam]`` is the incidence number of the (n-1)-cell ``mu`` in the
boundary of the n-cell ``lam``.  Nothing topological is stored; every
quantity computed by this package depends only on these numbers.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import combinations
from typing import Hashable, Iterable, Sequence

import numpy as np

from .errors import ComplexValidationError

FIELDS = ("F2", "Q", "R")


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=np.int64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class CWComplex:
    """Finite CW complex given by incidence numbers.

    Matrices are stored dense; ``regular_asserted`` is the caller's claim that
    the characteristic maps are homeomorphisms (only its {-1, 0, 1}
    consequence can be checked).
    """

    cell_counts: tuple[int, ...]
    incidence: tuple[np.ndarray, ...] = ()
    labels: tuple[tuple[str | None, ...], ...] | None = None
    regular_asserted: bool = False

    def __post_init__(self):
        counts = tuple(int(c) for c in self.cell_counts)
        if not counts:
            raise ValueError("a complex needs at least dimension 0")
        if any(c < 0 for c in counts):
            raise ValueError("cell counts must be nonnegative")
        mats = []
        for a in self.incidence:
            arr = np.asarray(a)
            if arr.size and not np.issubdtype(arr.dtype, np.integer):
                if not np.all(np.equal(np.mod(arr, 1), 0)):
                    raise ValueError("incidence entries must be integers")
            mats.append(arr)
        if len(mats) != len(counts) - 1:
            raise ValueError(f"need {len(counts) - 1} incidence matrices, got {len(mats)}")
        frozen = []
        for n, arr in enumerate(mats, start=1):
            shape = (counts[n - 1], counts[n])
            arr = np.zeros(shape, dtype=np.int64) if arr.size == 0 else arr
            if arr.shape != shape:
                raise ValueError(f"I_{n} has shape {arr.shape}, expected {shape}")
            frozen.append(_frozen(arr))
        labels = self.labels
        if labels is not None:
            if len(labels) != len(counts) or any(len(l) != c for l, c in zip(labels, counts)):
                raise ValueError("labels must give one entry per cell")
            labels = tuple(tuple(l) for l in labels)
        object.__setattr__(self, "cell_counts", counts)
        object.__setattr__(self, "incidence", tuple(frozen))
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "regular_asserted", bool(self.regular_asserted))

    @property
    def dim(self) -> int:
        return len(self.cell_counts) - 1

    def inc(self, n: int) -> np.ndarray:
        """``I_n``; an empty matrix of the right shape outside ``1..d``."""
        if 1 <= n <= self.dim:
            return self.incidence[n - 1]
        rows = self.cell_counts[n - 1] if 0 <= n - 1 <= self.dim else 0
        cols = self.cell_counts[n] if 0 <= n <= self.dim else 0
        return np.zeros((rows, cols), dtype=np.int64)

    def label(self, n: int, index: int) -> str:
        if self.labels is not None and self.labels[n][index] is not None:
            return self.labels[n][index]
        return f"e{n}_{index}"

    def __eq__(self, other):
        if not isinstance(other, CWComplex):
            return NotImplemented
        return (
            self.cell_counts == other.cell_counts
            and self.regular_asserted == other.regular_asserted
            and self.labels == other.labels
            and all(np.array_equal(a, b) for a, b in zip(self.incidence, other.incidence))
        )

    __hash__ = None

    def __repr__(self):
        return f"CWComplex(cell_counts={self.cell_counts}, regular_asserted={self.regular_asserted})"


@dataclass
class Cochain:
    """Coefficient vector on the n-cells over F2, Q or R."""

    dim: int
    field: str
    values: np.ndarray

    def __post_init__(self):
        if self.field not in FIELDS:
            raise ValueError(f"unknown field {self.field!r}")
        if self.field == "F2":
            v = np.asarray(self.values, dtype=np.int64)
            if np.any((v != 0) & (v != 1)):
                raise ValueError("F2 coefficients must be 0 or 1")
            self.values = v.astype(np.uint8)
        elif self.field == "Q":
            self.values = np.array([Fraction(x) for x in self.values], dtype=object)
        else:
            self.values = np.asarray(self.values, dtype=float)

    def check_length(self, complex_: CWComplex):
        if len(self.values) != complex_.cell_counts[self.dim]:
            raise ValueError(
                f"cochain has {len(self.values)} entries, dimension {self.dim} has "
                f"{complex_.cell_counts[self.dim]} cells"
            )

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.values))


@dataclass(frozen=True)
class Orientation:
    dim: int
    signs: tuple[int, ...]

    def __post_init__(self):
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError("orientation signs must be +1 or -1")


# --------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    rule: str
    n: int
    row: int | None = None
    col: int | None = None
    detail: str = ""

    def __str__(self):
        where = f"n={self.n}"
        if self.row is not None:
            where += f", row={self.row}, col={self.col}"
        return f"{self.rule} at {where}: {self.detail}" if self.detail else f"{self.rule} at {where}"


@dataclass
class ValidationReport:
    ok: bool
    violations: list[Violation] = field(default_factory=list)


def validate(complex_: CWComplex) -> ValidationReport:
    """Check ``I_n I_{n+1} = 0`` and, if regularity is asserted, ``|I| <= 1``."""
    violations = []
    for n in range(1, complex_.dim):
        prod = complex_.inc(n) @ complex_.inc(n + 1)
        for r, c in zip(*np.nonzero(prod)):
            violations.append(
                Violation("boundary-squared", n, int(r), int(c), f"(I_{n} I_{n + 1})[{r},{c}] = {prod[r, c]}")
            )
    if complex_.regular_asserted:
        for n in range(1, complex_.dim + 1):
            a = complex_.inc(n)
            for r, c in zip(*np.nonzero(np.abs(a) > 1)):
                violations.append(
                    Violation("regular-incidence", n, int(r), int(c), f"incidence {a[r, c]} not in {{-1,0,1}}")
                )
    return ValidationReport(not violations, violations)


def require_valid(complex_: CWComplex) -> None:
    report = validate(complex_)
    if not report.ok:
        raise ComplexValidationError("; ".join(map(str, report.violations[:5])), report.violations)


# --------------------------------------------------------------------------
# matrices and degrees


def boundary_matrix(complex_: CWComplex, n: int, field: str = "R", reduced: bool = False) -> np.ndarray:
    """Matrix of ``partial_n``: rows are (n-1)-cells, columns n-cells.

    With ``reduced`` and ``n == 0`` this is the augmentation row of ones.
    F2 entries are reduced mod 2, Q entries are Fractions, R entries floats.
    The coboundary matrix is the transpose.
    """
    if field not in FIELDS:
        raise ValueError(f"unknown field {field!r}")
    if n == 0:
        if not reduced:
            raise ValueError("boundary_matrix at n=0 needs reduced=True")
        a = np.ones((1, complex_.cell_counts[0]), dtype=np.int64)
    elif 1 <= n <= complex_.dim:
        a = np.array(complex_.inc(n))
    else:
        raise ValueError(f"n={n} outside 1..{complex_.dim}")
    if field == "F2":
        return np.mod(a, 2).astype(np.uint8)
    if field == "Q":
        return np.vectorize(Fraction, otypes=[object])(a) if a.size else a.astype(object)
    return a.astype(float)


def degrees(complex_: CWComplex, n: int) -> np.ndarray:
    """Degree of every n-cell: summed |incidence| with the (n+1)-cells."""
    if not 0 <= n <= complex_.dim:
        raise ValueError(f"dimension {n} outside 0..{complex_.dim}")
    if n == complex_.dim:
        return np.zeros(complex_.cell_counts[n], dtype=np.int64)
    return np.abs(complex_.inc(n + 1)).sum(axis=1)


def degree(complex_: CWComplex, n: int, cell: int) -> int:
    degs = degrees(complex_, n)
    if not 0 <= cell < len(degs):
        raise IndexError(f"cell {cell} out of range for dimension {n}")
    return int(degs[cell])


def boundary_set(complex_: CWComplex) -> list[int]:
    """The (d-1)-cells of degree exactly 1."""
    if complex_.dim < 1:
        raise ValueError("boundary_set needs d >= 1")
    return [int(i) for i in np.flatnonzero(degrees(complex_, complex_.dim - 1) == 1)]


def max_boundary_size(complex_: CWComplex) -> int:
    """``m``: the largest summed |incidence| over the boundary of a d-cell."""
    d = complex_.dim
    if d < 1 or complex_.cell_counts[d] == 0:
        return 0
    return int(np.abs(complex_.inc(d)).sum(axis=0).max())


def _require_unit_top(complex_: CWComplex, what: str):
    if complex_.dim < 1:
        raise ValueError(f"{what} needs d >= 1")
    if np.any(np.abs(complex_.inc(complex_.dim)) > 1):
        raise ValueError(f"{what} needs top incidence numbers in {{-1, 0, 1}}")


# --------------------------------------------------------------------------
# orientation


@dataclass(frozen=True)
class Orientable:
    orientation: Orientation

    orientable = True


@dataclass(frozen=True)
class NonOrientable:
    """Either ``branch_cell`` (a (d-1)-cell with >= 3 cofaces) or an odd ``cycle``.

    ``cycle`` alternates d-cells and the (d-1)-cells joining consecutive
    d-cells: ``(lam_0, mu_0, lam_1, mu_1, ..., lam_{k-1}, mu_{k-1})`` where
    ``mu_{k-1}`` joins ``lam_{k-1}`` back to ``lam_0``.  The required sign
    relations around it multiply to -1.
    """

    branch_cell: int | None = None
    cycle: tuple[int, ...] | None = None

    orientable = False


def _coface_pairs(complex_: CWComplex):
    top = complex_.inc(complex_.dim)
    for mu in range(top.shape[0]):
        cofaces = [int(l) for l in np.flatnonzero(top[mu])]
        yield mu, cofaces


def check_orientability(complex_: CWComplex) -> Orientable | NonOrientable:
    """Find d-cell signs making every shared (d-1)-cell see opposite incidences.

    Constraint through a shared ``mu``: ``s_lam * I[mu, lam] = -s_kap * I[mu, kap]``.
    Signs are propagated breadth-first from the lowest unassigned cell; a
    conflicting edge closes an odd cycle through the BFS tree.
    """
    _require_unit_top(complex_, "check_orientability")
    d = complex_.dim
    top = complex_.inc(d)
    adj: list[list[tuple[int, int, int]]] = [[] for _ in range(complex_.cell_counts[d])]
    for mu, cofaces in _coface_pairs(complex_):
        if len(cofaces) >= 3:
            return NonOrientable(branch_cell=mu)
        if len(cofaces) == 2:
            lam, kap = cofaces
            rel = -int(top[mu, lam]) * int(top[mu, kap])  # required s_lam * s_kap
            adj[lam].append((kap, mu, rel))
            adj[kap].append((lam, mu, rel))

    signs = [0] * complex_.cell_counts[d]
    parent: list[tuple[int, int] | None] = [None] * len(signs)
    for root in range(len(signs)):
        if signs[root]:
            continue
        signs[root] = 1
        queue = deque([root])
        while queue:
            lam = queue.popleft()
            for kap, mu, rel in adj[lam]:
                want = signs[lam] * rel
                if not signs[kap]:
                    signs[kap] = want
                    parent[kap] = (lam, mu)
                    queue.append(kap)
                elif signs[kap] != want:
                    return NonOrientable(cycle=_odd_cycle(parent, lam, kap, mu))
    return Orientable(Orientation(d, tuple(signs)))


def _to_root(parent, x):
    cells, mus = [x], []
    while parent[x] is not None:
        x, mu = parent[x]
        cells.append(x)
        mus.append(mu)
    return cells, mus


def _odd_cycle(parent, a, b, closing_mu) -> tuple[int, ...]:
    # a -> lca along the BFS tree, lca -> b, then the conflicting cell back to a
    cells_a, mus_a = _to_root(parent, a)
    cells_b, mus_b = _to_root(parent, b)
    on_b = {c: i for i, c in enumerate(cells_b)}
    ia = next(i for i, c in enumerate(cells_a) if c in on_b)
    ib = on_b[cells_a[ia]]
    seq: list[int] = []
    for i in range(ia):
        seq += [cells_a[i], mus_a[i]]
    seq.append(cells_a[ia])
    for j in range(ib - 1, -1, -1):
        seq += [mus_b[j], cells_b[j]]
    seq.append(closing_mu)
    return tuple(int(v) for v in seq)


def verify_odd_cycle(complex_: CWComplex, cycle: Sequence[int]) -> bool:
    """Check that an orientability witness cycle is genuine and odd."""
    top = complex_.inc(complex_.dim)
    cells = list(cycle[0::2])
    mus = list(cycle[1::2])
    if len(cells) != len(mus) or not cells:
        return False
    product = 1
    for i, mu in enumerate(mus):
        lam, kap = cells[i], cells[(i + 1) % len(cells)]
        if lam == kap or top[mu, lam] == 0 or top[mu, kap] == 0:
            return False
        product *= -int(top[mu, lam]) * int(top[mu, kap])
    return product == -1


def reorient(complex_: CWComplex, n: int, signs) -> CWComplex:
    """Flip the generator of every n-cell whose sign is -1."""
    if isinstance(signs, Orientation):
        signs = signs.signs
    s = np.asarray(signs, dtype=np.int64)
    if not 0 <= n <= complex_.dim:
        raise ValueError(f"dimension {n} outside 0..{complex_.dim}")
    if len(s) != complex_.cell_counts[n]:
        raise ValueError(f"need {complex_.cell_counts[n]} signs, got {len(s)}")
    if np.any(np.abs(s) != 1):
        raise ValueError("signs must be +1 or -1")
    mats = [np.array(a) for a in complex_.incidence]
    if n >= 1:
        mats[n - 1] = mats[n - 1] * s[None, :]
    if n + 1 <= complex_.dim:
        mats[n] = mats[n] * s[:, None]
    return CWComplex(complex_.cell_counts, tuple(mats), complex_.labels, complex_.regular_asserted)


# --------------------------------------------------------------------------
# boundary doubling


@dataclass
class AugmentedComplex:
    """``augmented`` = ``base`` plus a duplicate of each boundary (d-1)-cell
    and a virtual d-cell capping each original/duplicate pair.

    Virtual cells are appended after the real ones; ``virtual_top[i]`` caps
    ``boundary_cells[i]`` and ``virtual_lower[i]``.
    """

    base: CWComplex
    augmented: CWComplex
    boundary_cells: list[int]
    virtual_lower: list[int]
    virtual_top: list[int]


def augment_boundary(complex_: CWComplex) -> AugmentedComplex:
    _require_unit_top(complex_, "augment_boundary")
    d = complex_.dim
    bdry = boundary_set(complex_)
    counts = list(complex_.cell_counts)
    mats = [np.array(a) for a in complex_.incidence]
    c_low, c_top = counts[d - 1], counts[d]
    k = len(bdry)
    virtual_lower = list(range(c_low, c_low + k))
    virtual_top = list(range(c_top, c_top + k))
    if d >= 2:
        low = mats[d - 2]
        mats[d - 2] = np.hstack([low, low[:, bdry]])
    top = np.zeros((c_low + k, c_top + k), dtype=np.int64)
    top[:c_low, :c_top] = mats[d - 1]
    for i, mu in enumerate(bdry):
        top[mu, c_top + i] = 1
        top[c_low + i, c_top + i] = -1
    mats[d - 1] = top
    counts[d - 1] += k
    counts[d] += k
    labels = None
    if complex_.labels is not None:
        labels = [list(l) for l in complex_.labels]
        labels[d - 1] += [f"{complex_.label(d - 1, mu)}'" for mu in bdry]
        labels[d] += [f"cap({complex_.label(d - 1, mu)})" for mu in bdry]
    aug = CWComplex(tuple(counts), tuple(mats), labels, complex_.regular_asserted)
    return AugmentedComplex(complex_, aug, bdry, virtual_lower, virtual_top)


# --------------------------------------------------------------------------
# constructors


def _sort_key(v):
    return (0, v, "") if isinstance(v, int) else (1, 0, str(v))


def from_simplicial(facets: Iterable[Iterable[Hashable]], regular_asserted: bool = True) -> CWComplex:
    """Cellular structure of the simplicial complex generated by ``facets``.

    Faces are ordered lexicographically by sorted vertex tuple within each
    dimension; ``d[v_0..v_n] = sum_i (-1)^i [v_0..^v_i..v_n]``.
    """
    faces: dict[int, set[tuple]] = {}
    any_facet = False
    for facet in facets:
        verts = tuple(sorted(set(facet), key=_sort_key))
        if not verts:
            raise ValueError("empty facet")
        any_facet = True
        for k in range(1, len(verts) + 1):
            faces.setdefault(k - 1, set()).update(combinations(verts, k))
    if not any_facet:
        raise ValueError("no facets given")
    d = max(faces)
    ordered = [sorted(faces[n], key=lambda t: tuple(_sort_key(v) for v in t)) for n in range(d + 1)]
    index = [{f: i for i, f in enumerate(fs)} for fs in ordered]
    mats = []
    for n in range(1, d + 1):
        a = np.zeros((len(ordered[n - 1]), len(ordered[n])), dtype=np.int64)
        for j, face in enumerate(ordered[n]):
            for i in range(len(face)):
                a[index[n - 1][face[:i] + face[i + 1:]], j] = (-1) ** i
        mats.append(a)
    labels = tuple(tuple("[" + ",".join(str(v) for v in f) + "]" for f in fs) for fs in ordered)
    return CWComplex(tuple(len(fs) for fs in ordered), tuple(mats), labels, regular_asserted)


def _data_facets(name: str) -> list[list[int]]:
    text = resources.files("cwcheeger.data").joinpath(f"{name}.facets").read_text()
    from .cwx import parse_facets_text

    return parse_facets_text(text)


ZOO_NAMES = (
    "path",
    "cycle",
    "star",
    "simplex_boundary",
    "filled_simplex",
    "tetra_minus_face",
    "torus_7",
    "rp2_6",
    "klein_8",
    "book",
)
_PARAMETRIZED = {"path", "cycle", "star", "simplex_boundary", "filled_simplex", "book"}


def zoo(name: str, param: int | None = None) -> CWComplex:
    """Named fixture complexes.

    ``path k``/``star k``/``book k`` have k edges/edges/triangles,
    ``cycle k`` has k edges (k = 1, 2 are non-simplicial CW cycles),
    ``simplex_boundary n`` is the boundary of the n-simplex and
    ``filled_simplex n`` the n-simplex itself.
    """
    if name not in ZOO_NAMES:
        raise ValueError(f"unknown zoo complex {name!r}; choose from {', '.join(ZOO_NAMES)}")
    if name in _PARAMETRIZED:
        if param is None:
            raise ValueError(f"zoo complex {name!r} needs an integer parameter")
        k = int(param)
        if k < 1:
            raise ValueError(f"zoo parameter must be >= 1, got {k}")
    elif param is not None:
        raise ValueError(f"zoo complex {name!r} takes no parameter")

    if name == "path":
        cx = from_simplicial([(i, i + 1) for i in range(k)])
    elif name == "cycle":
        if k == 1:
            # one vertex, one loop; not regular
            cx = CWComplex((1, 1), (np.zeros((1, 1), dtype=np.int64),), (("[0]",), ("loop",)), False)
        elif k == 2:
            inc = np.array([[-1, -1], [1, 1]])
            cx = CWComplex((2, 2), (inc,), (("[0]", "[1]"), ("[0,1]a", "[0,1]b")), True)
        else:
            cx = from_simplicial([(i, i + 1) for i in range(k - 1)] + [(0, k - 1)])
    elif name == "star":
        cx = from_simplicial([(0, i) for i in range(1, k + 1)])
    elif name == "simplex_boundary":
        cx = from_simplicial(combinations(range(k + 1), k))
    elif name == "filled_simplex":
        cx = from_simplicial([tuple(range(k + 1))])
    elif name == "tetra_minus_face":
        cx = from_simplicial([(0, 1, 2), (0, 1, 3), (0, 2, 3)])
    elif name == "book":
        cx = from_simplicial([(0, 1, i) for i in range(2, k + 2)])
    else:
        cx = from_simplicial(_data_facets(name))
    require_valid(cx)
    return cx
