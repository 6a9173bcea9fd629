"""
A grouped Hamiltonian bound to one subspace
"""

import logging
from functools import cached_property
from typing import Optional

import scipy.sparse

from ..subspace.subspace import Subspace
from ..utils.errors import ValidationError
from .csr import CSRMatrix, build_csr
from .evaluation import DiagonalCache, compute_diagonal
from .grouping import GroupedHamiltonian, trim_groups
from .matrix_free import MatrixFreeOperator

logger = logging.getLogger(__name__)


class SubspaceHamiltonian:
    def __init__(self, gh: GroupedHamiltonian, subspace: Subspace, threads: int = 1):
        if gh.num_qubits > subspace.num_qubits:
            raise ValidationError(
                f"operator acts on {gh.num_qubits} qubits but bit-strings have width {subspace.num_qubits}"
            )
        self.gh = gh
        self.subspace = subspace
        self.threads = threads

    @property
    def dim(self) -> int:
        return self.subspace.dim

    @property
    def num_groups(self) -> int:
        return self.gh.num_groups

    @cached_property
    def diagonal(self) -> DiagonalCache:
        return compute_diagonal(self.gh, self.subspace, self.threads)

    def trim(self, tol: float) -> "SubspaceHamiltonian":
        trimmed = SubspaceHamiltonian(trim_groups(self.gh, self.diagonal.values, tol), self.subspace, self.threads)
        trimmed.__dict__["diagonal"] = self.diagonal
        return trimmed

    def to_csr(
        self,
        mode: str = "two-pass",
        lower_only: Optional[bool] = None,
        use_ladder_buckets: bool = True,
        index_width: Optional[str] = None,
    ) -> CSRMatrix:
        return build_csr(
            self.gh,
            self.subspace,
            mode=mode,
            lower_only=lower_only,
            diagonal=self.diagonal,
            use_ladder_buckets=use_ladder_buckets,
            threads=self.threads,
            index_width=index_width,
        )

    def to_scipy(self, mode: str = "two-pass") -> scipy.sparse.csr_matrix:
        return self.to_csr(mode).to_scipy()

    def linear_operator(self, use_ladder_buckets: bool = True) -> MatrixFreeOperator:
        return MatrixFreeOperator(self.gh, self.subspace, self.diagonal, self.threads, use_ladder_buckets)

    def __repr__(self) -> str:
        return f"SubspaceHamiltonian(dim={self.dim}, groups={self.num_groups}, fermionic={self.gh.fermionic})"
