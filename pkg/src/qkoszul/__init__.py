"""Exact deformation quantization and quantum phase-space reduction.

Everything is computed over the Gaussian rationals with a hard truncation
order in the deformation parameter; no floating point anywhere.
"""

from .exact import (
    AlgebraError,
    ContractViolationError,
    GaussianRational,
    LambdaSeries,
    MultiPoly,
    OrderMismatchError,
    VariableMismatchError,
    gr,
    invert_unipotent,
    t_integral,
)
from .phase_space import PhaseSpace, StarProduct, check_star_axioms, poisson_bracket

__all__ = [
    "AlgebraError",
    "ContractViolationError",
    "GaussianRational",
    "LambdaSeries",
    "MultiPoly",
    "OrderMismatchError",
    "VariableMismatchError",
    "gr",
    "invert_unipotent",
    "t_integral",
    "PhaseSpace",
    "StarProduct",
    "check_star_axioms",
    "poisson_bracket",
]
