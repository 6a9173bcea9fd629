"""
Command-line driver. Reports go to stdout as JSON, logs to stderr.

Exit codes: 0 success, 2 parse error, 3 validation error, 4 no convergence.
"""

import argparse
import asyncio
import logging
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__, workflow
from .database.run_store import RunStore
from .formats.bitstrings import emit_bitstrings, read_bitstrings
from .formats.matrix_market import write_matrix_market
from .formats.report import RunReport, emit_report
from .formats.term_list import emit_term_list, parse_term_list
from .models.spin_chain import CORRECTIONS, heisenberg_xxz, neel_subspace
from .subspace.subspace import Subspace
from .utils.errors import ConvergenceError, QSDError
from .utils.logger import setup_logging
from .utils.settings import get_settings, resolve_threads

logger = logging.getLogger("qsd_engine.cli")

LOWER_ONLY = {"auto": None, "on": True, "off": False}


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _write(path: Optional[str], text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)
        logger.info("wrote %s", path)


def _load_subspace(path: str, num_qubits: int, sort: bool = False) -> Subspace:
    subspace = read_bitstrings(_read(path), num_qubits).to_subspace()
    return subspace.sort_by_integer_value() if sort else subspace


def _emit(report: RunReport, args) -> None:
    text = emit_report(report)
    sys.stdout.write(text + "\n")
    if getattr(args, "record", False):
        store = RunStore(get_settings().run_db_path)
        run_id = asyncio.run(store.store_run(args.command, report.model_dump(exclude_none=True)))
        logger.info("recorded run %d in %s", run_id, store.db_path)


def cmd_jw(args) -> int:
    op = workflow.fermion_to_qubit(_read(args.fcidump), pauli=args.pauli_oracle, threads=args.threads)
    _write(args.output, emit_term_list(op))
    return 0


def cmd_build(args) -> int:
    op = parse_term_list(_read(args.operator))
    subspace = _load_subspace(args.bitstrings, op.num_qubits, args.sort)
    outcome = workflow.build(
        op,
        subspace,
        mode=args.mode,
        lower_only=LOWER_ONLY[args.lower_only],
        trim_tol=args.trim_tol,
        threads=args.threads,
        index_width=args.index_width,
    )
    write_matrix_market(outcome.matrix, args.output)
    outcome.report.output = args.output
    _emit(outcome.report, args)
    return 0


def _solve_options(args):
    return workflow.solve_options(
        tol=args.solver_tol,
        max_iter=args.max_iter,
        initial_vector=args.initial_vector,
        preconditioner=args.preconditioner,
        krylov_dim=args.krylov_dim,
        seed=args.seed,
    )


def cmd_solve(args) -> int:
    op = parse_term_list(_read(args.operator))
    subspace = _load_subspace(args.bitstrings, op.num_qubits, args.sort)
    outcome = workflow.solve(
        op,
        subspace,
        matrix_free=args.matrix_free,
        mode=args.mode,
        lower_only=LOWER_ONLY[args.lower_only],
        trim_tol=args.trim_tol,
        opts=_solve_options(args),
        threads=args.threads,
    )
    _emit(outcome.report, args)
    if not outcome.result.converged:
        raise ConvergenceError(f"eigensolver did not converge (residual {outcome.result.residual:.3e})")
    return 0


def cmd_ramps(args) -> int:
    op = parse_term_list(_read(args.operator))
    seeds = _load_subspace(args.seeds, op.num_qubits)
    full = _load_subspace(args.full_subspace, op.num_qubits) if args.full_subspace else None
    outcome = workflow.ramps(
        op,
        seeds,
        tolerance=args.ramps_tol,
        restrict_to=full,
        max_depth=args.max_depth,
        energy=args.energy,
        run_solve=not args.no_solve,
        matrix_free=args.matrix_free,
        mode=args.mode,
        opts=_solve_options(args),
        threads=args.threads,
    )
    _write(args.output, emit_bitstrings(outcome.result.subspace, op.num_qubits))
    outcome.report.output = args.output
    _emit(outcome.report, args)
    if outcome.solve is not None and not outcome.solve.converged:
        raise ConvergenceError(f"eigensolver did not converge (residual {outcome.solve.residual:.3e})")
    return 0


def cmd_neel(args) -> int:
    subspace = neel_subspace(args.L, hamming=args.hamming, correction=args.correction)
    _write(args.output, emit_bitstrings(subspace, args.L))
    return 0


def cmd_heisenberg(args) -> int:
    _write(args.output, emit_term_list(heisenberg_xxz(args.L, J=args.J, periodic=args.periodic)))
    return 0


def _add_matrix_options(parser: argparse.ArgumentParser):
    parser.add_argument("--mode", choices=["two-pass", "fast"], default="two-pass", help="CSR build mode")
    parser.add_argument(
        "--lower-only",
        choices=sorted(LOWER_ONLY),
        nargs="?",
        const="on",
        default="auto",
        help="evaluate only the lower triangle and mirror it (needs a sorted subspace)",
    )
    parser.add_argument("--trim-tol", type=float, default=0.0, help="drop groups weaker than this relative to the smallest diagonal splitting")
    parser.add_argument("--sort", action="store_true", help="sort the subspace by integer value first")


def _add_solver_options(parser: argparse.ArgumentParser, tol_flag: str = "--tol"):
    parser.add_argument("--matrix-free", action="store_true", help="recompute elements on every product instead of building CSR")
    parser.add_argument(tol_flag, dest="solver_tol", type=float, default=None, help="residual tolerance relative to the norm estimate")
    parser.add_argument("--max-iter", type=int, default=None)
    parser.add_argument("--initial-vector", choices=["uniform", "spike_at_min_diagonal"], default=None)
    parser.add_argument("--preconditioner", choices=["none", "shifted_jacobi"], default=None)
    parser.add_argument("--krylov-dim", type=int, default=None)
    parser.add_argument("--record", action="store_true", help="store the report in the run database")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qsd", description="Subspace Hamiltonian construction and solution")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--threads", type=int, default=None, help="worker threads (QSD_THREADS overrides)")
    parser.add_argument("--seed", type=int, default=None, help="seed for solver randomness")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
    parser.add_argument("--log-file", default=None)
    commands = parser.add_subparsers(dest="command", required=True)

    jw = commands.add_parser("jw", help="FCIDUMP file to extended-alphabet term list")
    jw.add_argument("fcidump")
    jw.add_argument("-o", "--output", default=None)
    jw.add_argument("--pauli-oracle", action="store_true", help="emit the plain Pauli decomposition instead")
    jw.set_defaults(handler=cmd_jw)

    build = commands.add_parser("build", help="assemble the subspace matrix in Matrix Market format")
    build.add_argument("operator")
    build.add_argument("bitstrings")
    build.add_argument("-o", "--output", required=True)
    build.add_argument("--index-width", choices=["auto", "32", "64"], default=None)
    _add_matrix_options(build)
    build.add_argument("--record", action="store_true", help="store the report in the run database")
    build.set_defaults(handler=cmd_build)

    solve = commands.add_parser("solve", help="lowest eigenvalue in the subspace")
    solve.add_argument("operator")
    solve.add_argument("bitstrings")
    _add_matrix_options(solve)
    _add_solver_options(solve)
    solve.set_defaults(handler=cmd_solve)

    ramps = commands.add_parser("ramps", help="perturbative subspace selection from seed bit-strings")
    ramps.add_argument("operator")
    ramps.add_argument("seeds")
    ramps.add_argument("-o", "--output", required=True, help="selected bit-strings")
    ramps.add_argument("--full-subspace", default=None, help="only admit bit-strings listed in this file")
    ramps.add_argument("--tol", dest="ramps_tol", type=float, default=1e-6, help="amplitude threshold")
    ramps.add_argument("--max-depth", type=int, default=None)
    ramps.add_argument("--energy", type=float, default=None, help="target energy (default: lowest seed diagonal)")
    ramps.add_argument("--no-solve", action="store_true")
    ramps.add_argument("--mode", choices=["two-pass", "fast"], default="two-pass")
    _add_solver_options(ramps, tol_flag="--solver-tol")
    ramps.set_defaults(handler=cmd_ramps)

    neel = commands.add_parser("neel", help="Neel state and its low-Hamming-distance neighbourhood")
    neel.add_argument("L", type=int)
    neel.add_argument("--hamming", type=int, default=1)
    neel.add_argument("--correction", choices=CORRECTIONS, default="expand")
    neel.add_argument("-o", "--output", default=None)
    neel.set_defaults(handler=cmd_neel)

    heisenberg = commands.add_parser("heisenberg", help="XXZ chain term list")
    heisenberg.add_argument("L", type=int)
    heisenberg.add_argument("--J", type=float, default=0.3)
    heisenberg.add_argument("--periodic", action="store_true")
    heisenberg.add_argument("-o", "--output", default=None)
    heisenberg.set_defaults(handler=cmd_heisenberg)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level, args.log_file)
    try:
        args.threads = resolve_threads(args.threads)
        return args.handler(args)
    except QSDError as e:
        logger.error("%s", e)
        return e.exit_code
    except OSError as e:
        logger.error("%s", e)
        return 1


if __name__ == "__main__":
    sys.exit(main())
