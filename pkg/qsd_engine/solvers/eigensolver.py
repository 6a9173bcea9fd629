"""
Lowest eigenpair of a Hermitian operator given only its product y = H x.

Both methods grow an orthonormal basis V together with W = H V and take
Ritz pairs from the projected matrix V^H W. Without a preconditioner the
basis is extended by the residual of the current Ritz vector, which spans
the same Krylov space as Lanczos (with full reorthogonalization). The
shifted Jacobi preconditioner turns this into Davidson's method, dividing
the residual by (diag - theta) with theta the current Ritz value. When the
basis reaches krylov_dim it is restarted from the lowest Ritz vectors.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Literal, Optional, Union

import numpy as np
import scipy.linalg
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..hamiltonian.csr import CSRMatrix
from ..hamiltonian.evaluation import DiagonalCache
from ..utils.errors import ValidationError

logger = logging.getLogger(__name__)

# Orthogonalized expansions shorter than this fraction of their input are treated as breakdown
BREAKDOWN_RATIO = 1e-10


class SolveOptions(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    which: Literal["lowest"] = "lowest"
    tol: float = Field(default=1e-10, gt=0.0)
    max_iter: int = Field(default=500, ge=1)
    initial_vector: Literal["uniform", "spike_at_min_diagonal", "user"] = "spike_at_min_diagonal"
    user_vector: Optional[np.ndarray] = None
    preconditioner: Literal["none", "shifted_jacobi"] = "none"
    krylov_dim: int = Field(default=40, ge=4)
    restart_keep: int = Field(default=8, ge=1)
    seed: int = 0

    @model_validator(mode="after")
    def check_user_vector(self) -> "SolveOptions":
        if self.initial_vector == "user" and self.user_vector is None:
            raise ValueError("initial_vector='user' requires user_vector")
        if self.restart_keep >= self.krylov_dim:
            raise ValueError("restart_keep must be smaller than krylov_dim")
        return self


@dataclass
class SolveResult:
    eigenvalue: float
    eigenvector: np.ndarray
    residual: float
    iterations: int
    converged: bool
    matvecs: int = 0


Operator = Union[CSRMatrix, Callable[[np.ndarray], np.ndarray], object]


def as_matvec(apply: Operator) -> Callable[[np.ndarray], np.ndarray]:
    """Accept a CSRMatrix, anything with .matvec or .dot, or a plain callable"""
    if isinstance(apply, CSRMatrix):
        return apply.spmv
    if hasattr(apply, "matvec"):
        return lambda x: np.asarray(apply.matvec(x)).reshape(-1)
    if hasattr(apply, "dot"):
        return lambda x: np.asarray(apply.dot(x)).reshape(-1)
    if callable(apply):
        return lambda x: np.asarray(apply(x)).reshape(-1)
    raise ValidationError(f"cannot apply an operator of type {type(apply).__name__}")


def initial_vector(diag: np.ndarray, opts: SolveOptions) -> np.ndarray:
    n = len(diag)
    if opts.initial_vector == "uniform":
        return np.full(n, 1.0 / np.sqrt(n))
    if opts.initial_vector == "spike_at_min_diagonal":
        v = np.zeros(n)
        v[int(np.argmin(np.real(diag)))] = 1.0
        return v
    v = np.asarray(opts.user_vector).reshape(-1)
    if v.shape[0] != n:
        raise ValidationError(f"user vector has length {v.shape[0]}, expected {n}")
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ValidationError("user vector is zero")
    return v / norm


def _orthogonalize(t: np.ndarray, basis: np.ndarray) -> np.ndarray:
    for _ in range(2):
        t = t - basis @ (basis.conj().T @ t)
    return t


def _random_direction(rng: np.random.Generator, basis: np.ndarray, dtype) -> Optional[np.ndarray]:
    t = rng.standard_normal(basis.shape[0]).astype(dtype)
    if np.issubdtype(dtype, np.complexfloating):
        t = t + 1j * rng.standard_normal(basis.shape[0])
    before = np.linalg.norm(t)
    t = _orthogonalize(t, basis)
    norm = np.linalg.norm(t)
    if norm <= BREAKDOWN_RATIO * before:
        return None
    return t / norm


def solve_lowest(apply: Operator, diag: Union[DiagonalCache, np.ndarray], opts: Optional[SolveOptions] = None) -> SolveResult:
    """Lowest eigenvalue and eigenvector; non-convergence is reported, not raised"""
    opts = opts or SolveOptions()
    diag = diag.values if isinstance(diag, DiagonalCache) else np.asarray(diag)
    n = len(diag)
    if n == 0:
        raise ValidationError("cannot solve on an empty subspace")

    matvec = as_matvec(apply)
    rng = np.random.default_rng(opts.seed)
    real_diag = np.real(diag)

    x0 = initial_vector(diag, opts)
    hx0 = matvec(x0)
    dtype = np.result_type(x0.dtype, hx0.dtype, np.float64)
    V = x0.astype(dtype).reshape(n, 1)
    W = hx0.astype(dtype).reshape(n, 1)
    matvecs = 1

    converged = False
    verified = False
    norm_estimate = 0.0
    while True:
        projected = V.conj().T @ W
        projected = (projected + projected.conj().T) / 2
        thetas, S = scipy.linalg.eigh(projected)
        norm_estimate = max(norm_estimate, float(np.max(np.abs(thetas))))
        theta = float(thetas[0])
        x = V @ S[:, 0]
        residual = W @ S[:, 0] - theta * x
        residual_norm = float(np.linalg.norm(residual))
        logger.debug("iteration %d: theta=%.15g residual=%.3e basis=%d", matvecs, theta, residual_norm, V.shape[1])

        if residual_norm <= opts.tol * norm_estimate or V.shape[1] >= n:
            # An invariant subspace reached from a special start can hide the
            # lowest state; one random direction checks for it.
            if verified or V.shape[1] >= n or matvecs >= opts.max_iter:
                converged = True
                break
            verified = True
            t = _random_direction(rng, V, dtype)
            if t is None:
                converged = True
                break
        elif matvecs >= opts.max_iter:
            break
        else:
            if opts.preconditioner == "shifted_jacobi":
                denominator = real_diag - theta
                floor = 1e-8 * max(1.0, abs(theta))
                small = np.abs(denominator) < floor
                denominator[small] = np.where(denominator[small] < 0, -floor, floor)
                t = residual / denominator
            else:
                t = residual

            if V.shape[1] >= opts.krylov_dim:
                keep = min(opts.restart_keep, S.shape[1])
                V = V @ S[:, :keep]
                W = W @ S[:, :keep]

            before = np.linalg.norm(t)
            t = _orthogonalize(t, V)
            norm = np.linalg.norm(t)
            if norm <= BREAKDOWN_RATIO * before:
                t = _random_direction(rng, V, dtype)
                if t is None:
                    break
            else:
                t = t / norm

        V = np.column_stack([V, t])
        W = np.column_stack([W, matvec(t).astype(dtype)])
        matvecs += 1

    x = x / np.linalg.norm(x)
    hx = matvec(x)
    eigenvalue = float(np.real(np.vdot(x, hx)))
    residual = float(np.linalg.norm(hx - eigenvalue * x))
    converged = converged and residual <= max(opts.tol * norm_estimate, 10 * opts.tol * abs(eigenvalue))
    if not converged:
        logger.warning(
            "eigensolver stopped after %d products without converging (residual %.3e, tol %.1e)",
            matvecs,
            residual,
            opts.tol,
        )
    else:
        logger.info("eigensolver converged: lambda=%.12f residual=%.3e products=%d", eigenvalue, residual, matvecs)
    return SolveResult(
        eigenvalue=eigenvalue,
        eigenvector=x,
        residual=residual,
        iterations=matvecs,
        converged=converged,
        matvecs=matvecs + 1,
    )
