"""
Matrix Market coordinate export of subspace matrices, 17 significant digits
"""

import io
import logging
from pathlib import Path
from typing import Union

import scipy.io
import scipy.sparse

from ..hamiltonian.csr import CSRMatrix

logger = logging.getLogger(__name__)

COMMENT = "format=1"
PRECISION = 17


def write_matrix_market(matrix: CSRMatrix, target: Union[str, Path, io.IOBase]) -> None:
    field = "complex" if matrix.data.dtype.kind == "c" else "real"
    if isinstance(target, Path):
        target = str(target)
    scipy.io.mmwrite(
        target,
        matrix.to_scipy(),
        comment=COMMENT,
        field=field,
        precision=PRECISION,
        symmetry="general",
    )
    logger.debug("wrote %dx%d matrix with %d entries", matrix.dim, matrix.dim, matrix.nnz)


def matrix_market_text(matrix: CSRMatrix) -> str:
    buffer = io.BytesIO()
    write_matrix_market(matrix, buffer)
    return buffer.getvalue().decode("ascii")


def read_matrix_market(source: Union[str, Path, io.IOBase]) -> CSRMatrix:
    if isinstance(source, Path):
        source = str(source)
    return CSRMatrix.from_scipy(scipy.sparse.csr_matrix(scipy.io.mmread(source)))
