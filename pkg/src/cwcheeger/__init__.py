"""Homology, Laplacian spectra and boundary expansion of finite CW complexes."""

from .complex import (
    AugmentedComplex,
    Cochain,
    CWComplex,
    NonOrientable,
    Orientable,
    Orientation,
    augment_boundary,
    boundary_matrix,
    boundary_set,
    check_orientability,
    degree,
    from_simplicial,
    reorient,
    validate,
    zoo,
)
from .cwx import load, loads, to_cwx
from .errors import BudgetExceeded, ComplexValidationError, CWError, InapplicableError, ParseError
from .expansion import (
    CheegerReport,
    ExpansionCertificate,
    SweepProfile,
    boundary_expansion,
    cheeger_check,
    coboundary_expansion,
    sweep,
    tree_expansion_oracle,
)
from .linalg import SearchBudget
from .spectral import betti, hodge_decompose, laplacian, smallest_nontrivial_eigenvalue

__version__ = "0.1.0"
