"""Exact arithmetic, dense matrices and multigraded spaces."""
from .field import DEFAULT_PRIME, GF, QQ, ContractError, Field
from .graded import (GradedMap, GradedSpace, add, add_deg, block_diag, compose, direct_sum,
                     direct_sum_spaces, identity, scale, shift, sub_deg, unit, zero_map)
from .linalg import (Matrix, complement_basis, complement_of, image_basis, image_of, inverse_of,
                     kernel_basis, kernel_of, left_inverse, rank, rank_of, rref, solve, solve_of)

__all__ = [
    "DEFAULT_PRIME", "GF", "QQ", "ContractError", "Field", "GradedMap", "GradedSpace", "add",
    "add_deg", "block_diag", "compose", "direct_sum", "direct_sum_spaces", "identity", "scale",
    "shift", "sub_deg", "unit", "zero_map", "Matrix", "complement_basis", "complement_of",
    "image_basis", "image_of", "inverse_of", "kernel_basis", "kernel_of", "left_inverse", "rank",
    "rank_of", "rref", "solve", "solve_of",
]
