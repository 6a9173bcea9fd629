"""
End-to-end pipelines shared by the command line and the HTTP service:
operator + bit-strings -> group -> (ramps, trim) -> CSR or matrix-free -> solve -> report.
"""

import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Dict, Iterator, Optional, Tuple

import numpy as np
import pydantic

from .formats.fcidump import parse_fcidump
from .formats.report import RunReport
from .hamiltonian.csr import CSRMatrix, resolve_lower_only
from .hamiltonian.grouping import GroupedHamiltonian, group_terms
from .hamiltonian.subspace_hamiltonian import SubspaceHamiltonian
from .operators.jordan_wigner import jordan_wigner
from .operators.qubit import QubitOperator, combine_like_terms
from .solvers.eigensolver import SolveOptions, SolveResult, solve_lowest
from .solvers.ramps import RampsConfig, RampsResult, ramps_search
from .subspace.subspace import Subspace
from .utils.errors import ValidationError
from .utils.settings import get_settings

logger = logging.getLogger(__name__)


class Timer:
    """Named wall-clock phases in milliseconds"""

    def __init__(self):
        self.timings_ms: Dict[str, float] = {}
        self._start = time.perf_counter()

    @contextmanager
    def phase(self, name: str) -> Iterator[None]:
        start = time.perf_counter()
        yield
        self.timings_ms[name] = self.timings_ms.get(name, 0.0) + (time.perf_counter() - start) * 1e3

    def finish(self) -> Dict[str, float]:
        self.timings_ms["total"] = (time.perf_counter() - self._start) * 1e3
        return dict(self.timings_ms)


@dataclass
class BuildOutcome:
    matrix: CSRMatrix
    report: RunReport


@dataclass
class SolveOutcome:
    result: SolveResult
    report: RunReport


@dataclass
class RampsOutcome:
    result: RampsResult
    report: RunReport
    solve: Optional[SolveResult] = None


def fermion_to_qubit(fcidump_text: str, pauli: bool = False, drop_tol: Optional[float] = None, threads: int = 1) -> QubitOperator:
    drop_tol = get_settings().drop_tol if drop_tol is None else drop_tol
    qubit_op = jordan_wigner(parse_fcidump(fcidump_text), drop_tol=drop_tol, threads=threads)
    return qubit_op.to_pauli() if pauli else qubit_op


def prepare(op: QubitOperator, threads: int = 1, drop_tol: Optional[float] = None) -> GroupedHamiltonian:
    drop_tol = get_settings().drop_tol if drop_tol is None else drop_tol
    return group_terms(combine_like_terms(op, drop_tol=drop_tol, threads=threads), threads=threads)


def _check_width(op: QubitOperator, subspace: Subspace):
    if subspace.num_qubits != op.num_qubits:
        raise ValidationError(
            f"bit-strings have width {subspace.num_qubits} but the operator acts on {op.num_qubits} qubits"
        )


def _bind(
    op: QubitOperator, subspace: Subspace, trim_tol: float, threads: int, timer: Timer
) -> Tuple[SubspaceHamiltonian, int]:
    _check_width(op, subspace)
    with timer.phase("group"):
        gh = prepare(op, threads)
    hamiltonian = SubspaceHamiltonian(gh, subspace, threads)
    with timer.phase("diagonal"):
        hamiltonian.diagonal
    num_groups = hamiltonian.num_groups
    if trim_tol > 0:
        with timer.phase("trim"):
            hamiltonian = hamiltonian.trim(trim_tol)
    return hamiltonian, num_groups


def build(
    op: QubitOperator,
    subspace: Subspace,
    mode: str = "two-pass",
    lower_only: Optional[bool] = None,
    trim_tol: float = 0.0,
    threads: int = 1,
    index_width: Optional[str] = None,
) -> BuildOutcome:
    timer = Timer()
    hamiltonian, num_groups = _bind(op, subspace, trim_tol, threads, timer)
    lower_only = resolve_lower_only(hamiltonian.gh, subspace, lower_only)
    with timer.phase("build"):
        matrix = hamiltonian.to_csr(mode=mode, lower_only=lower_only, index_width=index_width)
    report = RunReport(
        dim=subspace.dim,
        nnz=matrix.nnz,
        num_groups=num_groups,
        num_groups_after_trim=hamiltonian.num_groups,
        timings_ms=timer.finish(),
        mode=mode,
        num_qubits=op.num_qubits,
        lower_only=lower_only,
    )
    return BuildOutcome(matrix, report)


def configure(model: type, **values):
    """Construct an options model, reporting bad values as ValidationError"""
    try:
        return model(**values)
    except pydantic.ValidationError as e:
        problems = []
        for error in e.errors():
            field = ".".join(str(part) for part in error["loc"])
            message = error["msg"].removeprefix("Value error, ")
            problems.append(f"{field}: {message}" if field else message)
        raise ValidationError(f"invalid {model.__name__}: " + "; ".join(problems)) from e


def solve_options(**overrides) -> SolveOptions:
    config = get_settings()
    values = {"tol": config.solver_tol, "max_iter": config.solver_max_iter, "seed": config.seed}
    values.update({key: value for key, value in overrides.items() if value is not None})
    return configure(SolveOptions, **values)


def _solve_bound(
    hamiltonian: SubspaceHamiltonian,
    matrix_free: bool,
    mode: str,
    lower_only: Optional[bool],
    opts: SolveOptions,
    timer: Timer,
) -> Tuple[SolveResult, Optional[int], Optional[bool]]:
    if matrix_free:
        apply = hamiltonian.linear_operator()
        nnz = None
    else:
        lower_only = resolve_lower_only(hamiltonian.gh, hamiltonian.subspace, lower_only)
        with timer.phase("build"):
            apply = hamiltonian.to_csr(mode=mode, lower_only=lower_only)
        nnz = apply.nnz
    with timer.phase("solve"):
        result = solve_lowest(apply, hamiltonian.diagonal, opts)
    return result, nnz, (None if matrix_free else lower_only)


def solve(
    op: QubitOperator,
    subspace: Subspace,
    matrix_free: bool = False,
    mode: str = "two-pass",
    lower_only: Optional[bool] = None,
    trim_tol: float = 0.0,
    opts: Optional[SolveOptions] = None,
    threads: int = 1,
) -> SolveOutcome:
    opts = opts or solve_options()
    timer = Timer()
    hamiltonian, num_groups = _bind(op, subspace, trim_tol, threads, timer)
    result, nnz, lower_only = _solve_bound(hamiltonian, matrix_free, mode, lower_only, opts, timer)
    report = RunReport(
        eigenvalue=result.eigenvalue,
        residual=result.residual,
        iterations=result.iterations,
        converged=result.converged,
        dim=subspace.dim,
        nnz=nnz,
        num_groups=num_groups,
        num_groups_after_trim=hamiltonian.num_groups,
        timings_ms=timer.finish(),
        mode="matrix-free" if matrix_free else mode,
        num_qubits=op.num_qubits,
        lower_only=lower_only,
    )
    return SolveOutcome(result, report)


def ramps(
    op: QubitOperator,
    seeds: Subspace,
    tolerance: float,
    restrict_to: Optional[Subspace] = None,
    max_depth: Optional[int] = None,
    energy: Optional[float] = None,
    run_solve: bool = True,
    matrix_free: bool = False,
    mode: str = "two-pass",
    opts: Optional[SolveOptions] = None,
    threads: int = 1,
) -> RampsOutcome:
    """Prune or extend the seed subspace, then (optionally) solve on the result"""
    config = get_settings()
    timer = Timer()
    _check_width(op, seeds)
    if seeds.dim == 0:
        raise ValidationError("ramps needs at least one seed bit-string")
    with timer.phase("group"):
        gh = prepare(op, threads)
    seed_hamiltonian = SubspaceHamiltonian(gh, seeds, threads)
    if energy is None:
        with timer.phase("diagonal"):
            values = np.real(seed_hamiltonian.diagonal.values)
        energy = float(values.min())
        logger.info("target energy not given; using the lowest seed diagonal %.12g", energy)
        if energy == 0.0:
            raise ValidationError(
                "the lowest seed diagonal is 0, which cannot serve as the target energy "
                "(the starting prefactor is 1/|E|); pass a nonzero energy explicitly"
            )

    cfg = configure(
        RampsConfig,
        target_energy=energy,
        tolerance=tolerance,
        max_depth=config.ramps_max_depth if max_depth is None else max_depth,
        restrict_to=restrict_to,
        degeneracy_rel=config.degeneracy_rel,
        threads=threads,
    )
    with timer.phase("ramps"):
        result = ramps_search(gh, seeds, cfg)

    solved = None
    nnz = None
    lower_only = None
    if run_solve:
        hamiltonian = SubspaceHamiltonian(gh, result.subspace, threads)
        with timer.phase("diagonal"):
            hamiltonian.diagonal
        solved, nnz, lower_only = _solve_bound(
            hamiltonian, matrix_free, mode, None, opts or solve_options(), timer
        )

    report = RunReport(
        eigenvalue=solved.eigenvalue if solved else None,
        residual=solved.residual if solved else None,
        iterations=solved.iterations if solved else None,
        converged=solved.converged if solved else None,
        dim=seeds.dim,
        nnz=nnz,
        num_groups=gh.num_groups,
        num_groups_after_trim=gh.num_groups,
        timings_ms=timer.finish(),
        mode="ramps" if not run_solve else ("ramps+matrix-free" if matrix_free else f"ramps+{mode}"),
        ramps_subspace_dim=result.subspace.dim,
        ramps_depth_reached=result.depth_reached,
        ramps_degenerate_skipped=result.degenerate_skipped,
        num_qubits=op.num_qubits,
        lower_only=lower_only,
    )
    return RampsOutcome(result, report, solved)
