"""Numerics and the flat learner/plant state bundle."""

from .numerics import (
    as_vec, as_mat, symmetrize, jacobi_eigh, sym_min_eig, sym_max_eig,
    trapezoid_accumulate, simpson_accumulate, rk4_step,
)
from .state import StateLayout

__all__ = [
    "as_vec", "as_mat", "symmetrize", "jacobi_eigh", "sym_min_eig", "sym_max_eig",
    "trapezoid_accumulate", "simpson_accumulate", "rk4_step", "StateLayout",
]
