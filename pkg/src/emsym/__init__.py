"""Symmetry classification toolkit for charged-particle dynamics.

Submodules: ``expr`` (expression trees), ``liealg`` (equivalence algebra),
``optimal`` (optimal systems), ``fields`` (field specs and catalog),
``verify`` (symmetry detection), ``dynamics`` (integration and first
integrals), ``matching``/``audit`` (catalog identification) and ``cli``.
"""

__version__ = "0.1.0"

from .audit import audit_catalog, classify
from .dynamics import (
    InvariantFn,
    PhaseState,
    hamiltonian,
    integrate,
    involution_report,
    noether_integral,
    poisson_bracket,
)
from .estimators import Canonicalizer1D, SymmetryDetector, TableMatcher
from .expr import parse
from .fields import FieldSpec, catalog_instance, field_from_strings, monopole, stormer
from .fields.io import read_field_file
from .liealg import EquivGenerator, SymGenerator, adjoint_apply, bracket
from .matching import match_basis
from .optimal import canonicalize1D, check_subalgebra, verify_optimal_tables
from .verify import detect_symmetries, gauge_reconstruct, prolongation_residual

__all__ = [
    "Canonicalizer1D", "EquivGenerator", "FieldSpec", "InvariantFn", "PhaseState", "SymGenerator",
    "SymmetryDetector", "TableMatcher", "__version__", "adjoint_apply", "audit_catalog", "bracket",
    "canonicalize1D", "catalog_instance", "check_subalgebra", "classify", "detect_symmetries",
    "field_from_strings", "gauge_reconstruct", "hamiltonian", "integrate", "involution_report",
    "match_basis", "monopole", "noether_integral", "parse", "poisson_bracket", "prolongation_residual",
    "read_field_file", "stormer", "verify_optimal_tables",
]
