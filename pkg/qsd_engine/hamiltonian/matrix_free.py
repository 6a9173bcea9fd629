"""
Matrix-free products: every call recomputes the off-diagonal elements of
each row, nothing but the diagonal cache is kept between calls.
"""

import logging
from typing import Optional

import numpy as np
from scipy.sparse.linalg import LinearOperator

from ..subspace.subspace import Subspace
from ..utils.errors import ValidationError
from ..utils.parallel import map_chunks
from .evaluation import DiagonalCache, compute_diagonal, row_entries
from .grouping import GroupedHamiltonian

logger = logging.getLogger(__name__)


class MatrixFreeOperator(LinearOperator):
    """Hermitian subspace Hamiltonian exposed through the LinearOperator interface"""

    def __init__(
        self,
        gh: GroupedHamiltonian,
        subspace: Subspace,
        diagonal: Optional[DiagonalCache] = None,
        threads: int = 1,
        use_ladder_buckets: bool = True,
    ):
        self.gh = gh
        self.subspace = subspace
        self.diagonal = diagonal if diagonal is not None else compute_diagonal(gh, subspace, threads)
        self.threads = threads
        self.use_ladder_buckets = use_ladder_buckets
        self.num_calls = 0
        dtype = np.float64 if gh.compiled.is_real else np.complex128
        super().__init__(dtype=np.dtype(dtype), shape=(subspace.dim, subspace.dim))

    @property
    def dim(self) -> int:
        return self.subspace.dim

    def _matvec(self, x):
        x = np.asarray(x).reshape(-1)
        if x.shape[0] != self.dim:
            raise ValidationError(f"vector of length {x.shape[0]} does not match dimension {self.dim}")
        self.num_calls += 1
        dtype = np.result_type(self.dtype, x.dtype)
        compiled = self.gh.compiled
        subspace = self.subspace
        diag = self.diagonal.values

        def block(start: int, stop: int) -> np.ndarray:
            out = np.empty(stop - start, dtype=dtype)
            for i in range(start, stop):
                columns, values = row_entries(compiled, subspace, subspace[i], False, self.use_ladder_buckets)
                total = diag[i] * x[i]
                for j, value in zip(columns, values):
                    total += value * x[j]
                out[i - start] = total
            return out

        if self.dim == 0:
            return np.zeros(0, dtype=dtype)
        return np.concatenate(map_chunks(block, self.dim, self.threads))

    def _rmatvec(self, x):
        return self._matvec(x)

    def _adjoint(self):
        return self


def matvec(op: MatrixFreeOperator, x: np.ndarray) -> np.ndarray:
    return op.matvec(x).reshape(-1)
