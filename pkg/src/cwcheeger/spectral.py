"""Combinatorial Laplacians, their nontrivial spectra, Hodge splitting, Betti numbers."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .complex import CWComplex, Cochain
from .errors import InapplicableError
from .linalg import (
    f2_rank,
    orthonormal_basis,
    rational_column_basis,
    rational_nullspace,
    rational_rank,
    sym_eigen,
    zero_threshold,
)

KINDS = ("upper", "lower", "full")


def _check_dim(complex_: CWComplex, n: int):
    if not 0 <= n <= complex_.dim:
        raise ValueError(f"dimension {n} outside 0..{complex_.dim}")


def _has_lower(n: int, reduced: bool) -> bool:
    return n >= 1 or reduced


def _down(complex_: CWComplex, n: int, reduced: bool) -> np.ndarray:
    """Integer matrix of partial_n (augmentation row at n=0 when reduced)."""
    if n == 0:
        if reduced:
            return np.ones((1, complex_.cell_counts[0]), dtype=np.int64)
        return np.zeros((0, complex_.cell_counts[0]), dtype=np.int64)
    return np.array(complex_.inc(n))


def _up(complex_: CWComplex, n: int) -> np.ndarray:
    """Integer matrix of partial_{n+1}; empty at the top dimension."""
    return np.array(complex_.inc(n + 1))


def laplacian(complex_: CWComplex, n: int, kind: str = "full", reduced: bool = False) -> np.ndarray:
    """Dense matrix of the upper, lower or full Laplacian on n-cochains.

    With ``B = I_n``: lower is ``B^T B`` and the upper Laplacian one
    dimension down is ``B B^T``.
    """
    _check_dim(complex_, n)
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    c = complex_.cell_counts[n]
    out = np.zeros((c, c))
    if kind in ("upper", "full"):
        up = _up(complex_, n).astype(float)
        out += up @ up.T
    if kind in ("lower", "full"):
        if kind == "lower" and not _has_lower(n, reduced):
            raise ValueError("the lower Laplacian at n=0 needs reduced=True")
        down = _down(complex_, n, reduced).astype(float)
        out += down.T @ down
    return out


@dataclass
class SpectralReport:
    """Smallest eigenvalue of a Laplacian restricted to the nontrivial subspace."""

    n: int
    kind: str
    value: float
    vector: Cochain
    trivial_dim: int
    zero_threshold: float
    spectrum: np.ndarray

    @property
    def is_zero(self) -> bool:
        return abs(self.value) < self.zero_threshold


def nontrivial_basis(complex_: CWComplex, n: int, direction: str = "lower", reduced: bool = False) -> np.ndarray:
    """Orthonormal basis of ``B_n^perp`` (lower) or ``(B^n)^perp`` (upper).

    ``B_n^perp = ker I_{n+1}^T`` and ``(B^n)^perp = ker I_n``, each computed as
    an exact rational kernel before orthonormalizing.
    """
    _check_dim(complex_, n)
    c = complex_.cell_counts[n]
    if direction == "lower":
        constraint = _up(complex_, n).T
    elif direction == "upper":
        constraint = _down(complex_, n, reduced)
    else:
        raise ValueError("direction must be 'lower' or 'upper'")
    if constraint.shape[0] == 0 or not constraint.any():
        kernel = [[Fraction(int(i == j)) for i in range(c)] for j in range(c)]
    else:
        kernel = rational_nullspace(constraint.tolist(), c)
    return orthonormal_basis(kernel, c)


def smallest_nontrivial_eigenvalue(
    complex_: CWComplex, n: int, direction: str = "lower", reduced: bool = False, tol: float = 1e-10
) -> SpectralReport:
    """``lambda_n`` (lower) or ``lambda^n`` (upper) with an attaining unit eigenvector.

    The value may be 0 when harmonic cochains exist.
    """
    lap = laplacian(complex_, n, direction, reduced)
    Q = nontrivial_basis(complex_, n, direction, reduced)
    if Q.shape[1] == 0:
        raise InapplicableError(
            f"the nontrivial subspace for the {direction} Laplacian at n={n} is empty"
        )
    restricted = Q.T @ lap @ Q
    restricted = (restricted + restricted.T) / 2
    eig = sym_eigen(restricted, tol=tol)
    vec = Q @ eig.vectors[:, 0]
    vec /= np.linalg.norm(vec)
    # deterministic sign: largest-magnitude entry (lowest index on ties) positive
    pivot = int(np.argmax(np.round(np.abs(vec), 12)))
    if vec[pivot] < 0:
        vec = -vec
    return SpectralReport(
        n=n,
        kind=direction,
        value=float(eig.values[0]),
        vector=Cochain(n, "R", vec),
        trivial_dim=complex_.cell_counts[n] - Q.shape[1],
        zero_threshold=zero_threshold(lap),
        spectrum=eig.values,
    )


def spectrum(complex_: CWComplex, n: int, kind: str = "full", reduced: bool = False) -> np.ndarray:
    """All eigenvalues of a Laplacian, ascending."""
    return sym_eigen(laplacian(complex_, n, kind, reduced)).values


def rayleigh_quotient(lap: np.ndarray, f) -> float:
    f = np.asarray(f, dtype=float)
    return float(f @ lap @ f / (f @ f))


@dataclass
class HodgeSplit:
    exact: Cochain
    harmonic: Cochain
    coexact: Cochain
    exact_dim: int
    harmonic_dim: int
    coexact_dim: int


def _projector_basis(mat: np.ndarray, length: int) -> np.ndarray:
    if mat.size == 0 or not mat.any():
        return np.zeros((length, 0))
    return orthonormal_basis(rational_column_basis(mat.tolist()), length)


def hodge_decompose(complex_: CWComplex, n: int, f, reduced: bool = False) -> HodgeSplit:
    """Split an n-cochain into exact (im of coboundary), harmonic and coexact (im of boundary) parts."""
    _check_dim(complex_, n)
    values = f.values if isinstance(f, Cochain) else f
    values = np.asarray(values, dtype=float)
    c = complex_.cell_counts[n]
    if values.shape != (c,):
        raise ValueError(f"cochain has length {len(values)}, dimension {n} has {c} cells")
    Qe = _projector_basis(_down(complex_, n, reduced).T, c)
    Qc = _projector_basis(_up(complex_, n), c)
    exact = Qe @ (Qe.T @ values)
    coexact = Qc @ (Qc.T @ values)
    harmonic = values - exact - coexact
    return HodgeSplit(
        Cochain(n, "R", exact),
        Cochain(n, "R", harmonic),
        Cochain(n, "R", coexact),
        Qe.shape[1],
        c - Qe.shape[1] - Qc.shape[1],
        Qc.shape[1],
    )


def _rank(mat: np.ndarray, field: str) -> int:
    if mat.size == 0:
        return 0
    if field == "F2":
        return f2_rank(np.mod(mat, 2))
    return rational_rank(mat.tolist())


def betti(complex_: CWComplex, n: int, field: str = "Q", reduced: bool = False) -> int:
    """``c_n - rank I_n - rank I_{n+1}`` over F2 or Q."""
    _check_dim(complex_, n)
    if field not in ("F2", "Q"):
        raise ValueError("field must be 'F2' or 'Q'")
    return (
        complex_.cell_counts[n]
        - _rank(_down(complex_, n, reduced), field)
        - _rank(_up(complex_, n), field)
    )


__all__ = [
    "HodgeSplit",
    "SpectralReport",
    "betti",
    "hodge_decompose",
    "laplacian",
    "nontrivial_basis",
    "rayleigh_quotient",
    "smallest_nontrivial_eigenvalue",
    "spectrum",
]
