"""
Compressed sparse row assembly of a grouped Hamiltonian over a subspace.

Every row stores its diagonal entry, even when it is 0.0. Off-diagonal
entries are produced per row by `row_entries` in group order; with
lower_only only entries below the diagonal are evaluated and each one is
also emitted, conjugated, into the row of its column. Both build modes sort
each row by column index at the end, so their outputs are identical.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
import scipy.sparse

from ..subspace.subspace import Subspace
from ..utils.errors import IndexWidthError, ValidationError
from ..utils.parallel import map_chunks
from ..utils.settings import get_settings
from .evaluation import DiagonalCache, compute_diagonal, row_entries
from .grouping import GroupedHamiltonian

logger = logging.getLogger(__name__)

INT32_LIMIT = 2 ** 31


@dataclass(frozen=True, eq=False)
class CSRMatrix:
    indptr: np.ndarray
    indices: np.ndarray
    data: np.ndarray
    dim: int

    @property
    def nnz(self) -> int:
        return int(self.indptr[-1]) if len(self.indptr) else 0

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.dim, self.dim)

    @property
    def dtype(self) -> np.dtype:
        return self.data.dtype

    def to_scipy(self) -> scipy.sparse.csr_matrix:
        return scipy.sparse.csr_matrix((self.data, self.indices, self.indptr), shape=self.shape)

    @classmethod
    def from_scipy(cls, matrix) -> "CSRMatrix":
        matrix = scipy.sparse.csr_matrix(matrix)
        matrix.sort_indices()
        if matrix.shape[0] != matrix.shape[1]:
            raise ValidationError(f"matrix must be square, got shape {matrix.shape}")
        return cls(matrix.indptr, matrix.indices, matrix.data, matrix.shape[0])

    def to_dense(self) -> np.ndarray:
        return self.to_scipy().toarray()

    def diagonal(self) -> np.ndarray:
        return self.to_scipy().diagonal()

    def spmv(self, x: np.ndarray, threads: int = 1) -> np.ndarray:
        return spmv(self, x, threads)

    def equals(self, other: "CSRMatrix") -> bool:
        """Identical structure and bit-identical values"""
        return (
            self.dim == other.dim
            and self.data.dtype == other.data.dtype
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.data, other.data)
        )

    def hermiticity_error(self) -> float:
        if self.dim == 0:
            return 0.0
        matrix = self.to_scipy()
        difference = matrix - matrix.conj().T
        return float(abs(difference).max()) if difference.nnz else 0.0


def resolve_lower_only(gh: GroupedHamiltonian, subspace: Subspace, lower_only: Optional[bool]) -> bool:
    """None picks lower-triangle evaluation for Hermitian operators on sorted subspaces"""
    if lower_only is None:
        return subspace.is_sorted and gh.is_hermitian()
    if lower_only and not subspace.is_sorted:
        raise ValidationError("lower-triangle evaluation needs a subspace sorted by integer value")
    return lower_only


def index_dtypes(dim: int, nnz: int, index_width: Optional[str] = None) -> Tuple[type, type]:
    """(indices dtype, indptr dtype) for the requested width: auto, 32 or 64"""
    index_width = index_width or get_settings().index_width
    if index_width == "64":
        return np.int64, np.int64
    if index_width == "32":
        if dim >= INT32_LIMIT or nnz >= INT32_LIMIT:
            raise IndexWidthError(
                f"matrix with dim={dim} and nnz={nnz} does not fit 32-bit indices; "
                "request index width 64"
            )
        return np.int32, np.int32
    return (
        np.int32 if dim < INT32_LIMIT else np.int64,
        np.int32 if nnz < INT32_LIMIT else np.int64,
    )


def _data_dtype(gh: GroupedHamiltonian) -> type:
    return np.float64 if gh.compiled.is_real else np.complex128


def _canonicalize(indptr: np.ndarray, indices: np.ndarray, data: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    rows = np.repeat(np.arange(len(indptr) - 1), np.diff(indptr))
    order = np.lexsort((indices, rows))
    return indices[order], data[order]


def build_csr_two_pass(
    gh: GroupedHamiltonian,
    subspace: Subspace,
    lower_only: Optional[bool] = None,
    diagonal: Optional[DiagonalCache] = None,
    use_ladder_buckets: bool = True,
    threads: int = 1,
    index_width: Optional[str] = None,
) -> CSRMatrix:
    """Count entries per row, allocate once, then fill"""
    lower_only = resolve_lower_only(gh, subspace, lower_only)
    diagonal = diagonal if diagonal is not None else compute_diagonal(gh, subspace, threads)
    compiled = gh.compiled
    dim = subspace.dim

    def count(start: int, stop: int) -> Tuple[np.ndarray, List[int]]:
        own = np.ones(stop - start, dtype=np.int64)
        mirrored: List[int] = []
        for i in range(start, stop):
            columns, _ = row_entries(compiled, subspace, subspace[i], lower_only, use_ladder_buckets)
            own[i - start] += len(columns)
            if lower_only:
                mirrored.extend(columns)
        return own, mirrored

    counted = map_chunks(count, dim, threads)
    own_counts = np.concatenate([c[0] for c in counted]) if counted else np.zeros(0, dtype=np.int64)
    counts = own_counts.copy()
    for _, mirrored in counted:
        np.add.at(counts, np.asarray(mirrored, dtype=np.int64), 1)

    indptr64 = np.zeros(dim + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr64[1:])
    nnz = int(indptr64[-1])
    index_type, pointer_type = index_dtypes(dim, nnz, index_width)

    indices = np.empty(nnz, dtype=index_type)
    data = np.empty(nnz, dtype=_data_dtype(gh))

    def fill(start: int, stop: int) -> List[Tuple[int, int, complex]]:
        mirrored: List[Tuple[int, int, complex]] = []
        for i in range(start, stop):
            position = int(indptr64[i])
            indices[position] = i
            data[position] = diagonal[i]
            columns, values = row_entries(compiled, subspace, subspace[i], lower_only, use_ladder_buckets)
            stop_position = position + 1 + len(columns)
            indices[position + 1:stop_position] = columns
            data[position + 1:stop_position] = values
            if lower_only:
                mirrored.extend((j, i, np.conj(v)) for j, v in zip(columns, values))
        return mirrored

    cursor = indptr64[:-1] + own_counts
    for mirrored in map_chunks(fill, dim, threads):
        for j, i, value in mirrored:
            indices[cursor[j]] = i
            data[cursor[j]] = value
            cursor[j] += 1

    indices, data = _canonicalize(indptr64, indices, data)
    matrix = CSRMatrix(indptr64.astype(pointer_type), indices, data, dim)
    logger.info(
        "two-pass CSR: dim=%d nnz=%d lower_only=%s dtype=%s", dim, matrix.nnz, lower_only, data.dtype
    )
    return matrix


def build_csr_fast(
    gh: GroupedHamiltonian,
    subspace: Subspace,
    lower_only: Optional[bool] = None,
    diagonal: Optional[DiagonalCache] = None,
    use_ladder_buckets: bool = True,
    threads: int = 1,
    index_width: Optional[str] = None,
) -> CSRMatrix:
    """Single pass into per-row buffers, then one copy into CSR"""
    lower_only = resolve_lower_only(gh, subspace, lower_only)
    diagonal = diagonal if diagonal is not None else compute_diagonal(gh, subspace, threads)
    compiled = gh.compiled
    dim = subspace.dim

    def collect(start: int, stop: int):
        rows_columns: List[List[int]] = []
        rows_values: List[list] = []
        mirrored: List[Tuple[int, int, complex]] = []
        for i in range(start, stop):
            columns, values = row_entries(compiled, subspace, subspace[i], lower_only, use_ladder_buckets)
            if lower_only:
                mirrored.extend((j, i, np.conj(v)) for j, v in zip(columns, values))
            rows_columns.append([i] + columns)
            rows_values.append([diagonal[i]] + values)
        return rows_columns, rows_values, mirrored

    buffers_columns: List[List[int]] = []
    buffers_values: List[list] = []
    pending = []
    for rows_columns, rows_values, mirrored in map_chunks(collect, dim, threads):
        buffers_columns.extend(rows_columns)
        buffers_values.extend(rows_values)
        pending.append(mirrored)
    for mirrored in pending:
        for j, i, value in mirrored:
            buffers_columns[j].append(i)
            buffers_values[j].append(value)

    counts = np.fromiter((len(b) for b in buffers_columns), dtype=np.int64, count=dim)
    indptr64 = np.zeros(dim + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr64[1:])
    nnz = int(indptr64[-1])
    index_type, pointer_type = index_dtypes(dim, nnz, index_width)

    indices = np.fromiter((c for row in buffers_columns for c in row), dtype=index_type, count=nnz)
    data_type = _data_dtype(gh)
    if data_type is np.float64:
        data = np.fromiter((np.real(v) for row in buffers_values for v in row), dtype=data_type, count=nnz)
    else:
        data = np.fromiter((v for row in buffers_values for v in row), dtype=data_type, count=nnz)

    indices, data = _canonicalize(indptr64, indices, data)
    matrix = CSRMatrix(indptr64.astype(pointer_type), indices, data, dim)
    logger.info("fast CSR: dim=%d nnz=%d lower_only=%s dtype=%s", dim, matrix.nnz, lower_only, data.dtype)
    return matrix


BUILDERS = {
    "two-pass": build_csr_two_pass,
    "fast": build_csr_fast,
}


def build_csr(gh: GroupedHamiltonian, subspace: Subspace, mode: str = "two-pass", **kwargs) -> CSRMatrix:
    try:
        builder = BUILDERS[mode]
    except KeyError:
        raise ValidationError(f"unknown build mode {mode!r}, expected one of {sorted(BUILDERS)}")
    return builder(gh, subspace, **kwargs)


def spmv(matrix: CSRMatrix, x: np.ndarray, threads: int = 1) -> np.ndarray:
    """y = A x with rows evaluated independently in contiguous blocks"""
    x = np.asarray(x)
    if x.shape != (matrix.dim,):
        raise ValidationError(f"vector of shape {x.shape} does not match dimension {matrix.dim}")
    dtype = np.result_type(matrix.data.dtype, x.dtype)
    if matrix.dim == 0:
        return np.zeros(0, dtype=dtype)
    indptr, indices, data = matrix.indptr, matrix.indices, matrix.data

    def block(start: int, stop: int) -> np.ndarray:
        lo, hi = int(indptr[start]), int(indptr[stop])
        products = np.zeros(hi - lo + 1, dtype=dtype)
        products[:-1] = data[lo:hi] * x[indices[lo:hi]]
        offsets = (indptr[start:stop] - lo).astype(np.int64)
        sums = np.add.reduceat(products, offsets)
        sums[np.diff(indptr[start:stop + 1]) == 0] = 0
        return sums

    return np.concatenate(map_chunks(block, matrix.dim, threads))
