"""Upper bounds on Euclidean minima of number fields, with lattice-level checks."""

from .bounds import (
    BoundResult,
    a_equals_s_bound,
    all_bounds,
    bayer_fluckiger_bound,
    best_bound,
    bfbj_bound,
    corollary_bound,
    improvement_factor,
    theorem_bound,
)
from .exact import ExactConstant
from .field import (
    FieldDescriptor,
    IntPolynomial,
    descriptor_from_polynomial,
    polynomial_discriminant,
    signature_from_polynomial,
)
from .hermite import (
    HermiteEstimate,
    best_hermite_upper,
    blichfeldt_bound,
    hermite_exact,
    wen_bounds,
)

__version__ = "0.1.0"
