"""Exact liaison experiments for point schemes in the projective plane."""

__version__ = "0.1.0"

from .field import DEFAULT_PRIME, PrimeField, Rationals, make_field
from .ideal import BettiTable, HilbertProfile, IdealHandle, ideal_quotient_piece, is_complete_intersection
from .liaison import (
    LiaisonStep,
    VerificationReport,
    dimension_identity_tangential,
    expected_residual_betti_tangential,
    mu_surjective,
    residuate,
    riemann_roch_ledger,
    verify_corollary_triangular,
    verify_lemma1,
    verify_prop_tangential,
)
from .linalg import Subspace, kernel_basis, rank, rref
from .ring import Form, GradedSubspace, ProjPoint, evaluate, multiply, poly_matrix_det

__all__ = [
    "DEFAULT_PRIME", "PrimeField", "Rationals", "make_field",
    "BettiTable", "HilbertProfile", "IdealHandle", "ideal_quotient_piece", "is_complete_intersection",
    "LiaisonStep", "VerificationReport", "dimension_identity_tangential",
    "expected_residual_betti_tangential", "mu_surjective", "residuate", "riemann_roch_ledger",
    "verify_corollary_triangular", "verify_lemma1", "verify_prop_tangential",
    "Subspace", "kernel_basis", "rank", "rref",
    "Form", "GradedSubspace", "ProjPoint", "evaluate", "multiply", "poly_matrix_det",
]
