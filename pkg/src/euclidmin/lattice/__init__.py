"""Minkowski-embedding lattices, reduction, enumeration and the lattice inequalities."""

from .basis import LatticeBasis
from .embedding import isolate_roots, minkowski_basis
from .enumeration import MinimaEstimate, enumerate_ball, successive_minima
from .minima import (
    CheckResult,
    TargetSpec,
    det_identity_check,
    homogeneous_minimum_estimate,
    inhomogeneous_minimum_lower_estimate,
    lemma_M_mun_check,
    lemma_m_mu1_check,
    length_inequality_batch,
    length_inequality_exact,
    length_lower_bound,
    minkowski_product_check,
    norm_form,
)
from .reduction import lll_reduce, lll_reduce_with_transform

__all__ = [
    "CheckResult",
    "LatticeBasis",
    "MinimaEstimate",
    "TargetSpec",
    "det_identity_check",
    "enumerate_ball",
    "homogeneous_minimum_estimate",
    "inhomogeneous_minimum_lower_estimate",
    "isolate_roots",
    "lemma_M_mun_check",
    "lemma_m_mu1_check",
    "length_inequality_batch",
    "length_inequality_exact",
    "length_lower_bound",
    "lll_reduce",
    "lll_reduce_with_transform",
    "minkowski_basis",
    "minkowski_product_check",
    "norm_form",
    "successive_minima",
]
