"""Grouping, matrix-element evaluation and sparse assembly over subspaces"""

from .grouping import GroupedHamiltonian, group_terms, ladder_integer, row_ladder_integer, trim_groups
from .evaluation import DiagonalCache, compute_diagonal, diagonal_value, group_element, msob_is_lower
from .csr import CSRMatrix, build_csr, build_csr_fast, build_csr_two_pass, spmv
from .matrix_free import MatrixFreeOperator, matvec
from .subspace_hamiltonian import SubspaceHamiltonian

__all__ = [
    "GroupedHamiltonian",
    "group_terms",
    "ladder_integer",
    "row_ladder_integer",
    "trim_groups",
    "DiagonalCache",
    "compute_diagonal",
    "diagonal_value",
    "group_element",
    "msob_is_lower",
    "CSRMatrix",
    "build_csr",
    "build_csr_fast",
    "build_csr_two_pass",
    "spmv",
    "MatrixFreeOperator",
    "matvec",
    "SubspaceHamiltonian",
]
