"""Sombor spectra of super graphs built on dihedral, quaternion and semidihedral groups."""

from .closedform import (
    CatalogMiss,
    ClosedFormPrediction,
    SpectralClaim,
    divisor_structure,
    euler_phi,
    predict,
    predict_all,
    quotient_spec,
)
from .graphs import (
    Complete,
    Empty,
    JoinSkeleton,
    SimpleGraph,
    commuting_graph,
    compressed_graph,
    enhanced_power_graph,
    generalized_join,
    power_graph,
    super_graph,
)
from .groups import Family, FiniteGroup, GroupElement, GroupSpec, ParameterRangeError, VertexPartition, make_group, parse_family
from .isomorphism import find_isomorphism, is_isomorphic
from .spectral import (
    char_poly,
    cluster_spectrum,
    eigen_sym,
    equitable_quotient,
    eval_poly,
    lemma21_predict,
    sombor_matrix,
)
from .verify import VerificationReport, VerificationTask, flagged_keys, run_cell, run_suite, run_task, structural_suite

__version__ = "0.1.0"

_SUBMODULES = {"cli", "closedform", "graphs", "groups", "isomorphism", "spectral", "verify"}
__all__ = sorted(name for name in dir() if not name.startswith("_") and name not in _SUBMODULES)
