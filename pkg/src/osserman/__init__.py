"""Exact verification of Osserman-type properties of algebraic curvature tensors."""

from .checks import Outcome, Verdict, check_jordan_osserman, check_osserman, check_osserman_equivalence
from .curvature import (
    CliffordFamily,
    DenseCurvature,
    FamilyTerm,
    assemble,
    r0,
    rescale_family,
    rJ,
    validate_family,
    validate_tensor,
)
from .duality import (
    build_theta_matrix,
    certify_total_jacobi_dual,
    check_condition_10,
    check_jacobi_dual,
    check_total_jacobi_dual,
    construct_total_duality_counterwitness,
    dependence_in_F,
    isotropic_supplement,
    theta_quadratic,
)
from .linalg import Poly, ScalarSpace, VectorType, rational
from .spectral import IrrationalSpectrum, char_poly, jacobi, jacobi_structured, spectral

__all__ = [
    "CliffordFamily", "DenseCurvature", "FamilyTerm", "IrrationalSpectrum", "Outcome", "Poly", "ScalarSpace",
    "Verdict", "VectorType", "assemble", "build_theta_matrix", "certify_total_jacobi_dual", "char_poly",
    "check_condition_10", "check_jacobi_dual", "check_jordan_osserman", "check_osserman",
    "check_osserman_equivalence", "check_total_jacobi_dual", "construct_total_duality_counterwitness",
    "dependence_in_F", "isotropic_supplement", "jacobi", "jacobi_structured", "r0", "rJ", "rational",
    "rescale_family", "spectral", "theta_quadratic", "validate_family", "validate_tensor",
]
