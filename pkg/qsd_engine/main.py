"""
HTTP service for subspace solves, perturbative selection and fermionic transforms
"""

import asyncio
import logging
from typing import Any, Dict, List, Literal, Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from . import __version__, workflow
from .database.run_store import RunStore
from .formats.bitstrings import read_bitstrings
from .formats.term_list import emit_term_list, parse_term_list
from .subspace.bitstring import format_bitstring
from .utils.errors import ParseError, QSDError, ValidationError
from .utils.logger import setup_logging
from .utils.settings import get_settings

logger = logging.getLogger("qsd_engine.service")

app = FastAPI(title="QSD Engine", version=__version__)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


# Request/Response models
class SolveRequest(BaseModel):
    operator: str = Field(description="term-list text")
    bitstrings: str = Field(description="bit-string list text")
    matrix_free: bool = False
    mode: Literal["two-pass", "fast"] = "two-pass"
    lower_only: Optional[bool] = None
    trim_tol: float = Field(default=0.0, ge=0.0)
    tol: Optional[float] = Field(default=None, gt=0.0)
    max_iter: Optional[int] = Field(default=None, ge=1)
    initial_vector: Optional[Literal["uniform", "spike_at_min_diagonal"]] = None
    preconditioner: Optional[Literal["none", "shifted_jacobi"]] = None
    record: bool = True


class RampsRequest(BaseModel):
    operator: str
    seeds: str
    full_subspace: Optional[str] = None
    tol: float = Field(default=1e-6, gt=0.0)
    max_depth: Optional[int] = Field(default=None, ge=1)
    energy: Optional[float] = None
    solve: bool = True
    record: bool = True


class JordanWignerRequest(BaseModel):
    fcidump: str
    pauli: bool = False


class RunResponse(BaseModel):
    run_id: Optional[int] = None
    report: Dict[str, Any]


class RampsResponse(RunResponse):
    bitstrings: List[str]


class JordanWignerResponse(BaseModel):
    operator: str
    num_qubits: int
    num_terms: int


class HealthResponse(BaseModel):
    status: str
    services: Dict[str, str]


run_store = None


def get_run_store() -> RunStore:
    """Get or create the singleton run store"""
    global run_store
    if run_store is None:
        run_store = RunStore(get_settings().run_db_path)
    return run_store


def _http_error(e: Exception) -> HTTPException:
    if isinstance(e, HTTPException):
        return e
    if isinstance(e, ParseError):
        return HTTPException(status_code=400, detail=str(e))
    if isinstance(e, (ValidationError, QSDError)):
        return HTTPException(status_code=422, detail=str(e))
    logger.exception("request failed")
    return HTTPException(status_code=500, detail=f"Request failed: {str(e)}")


async def _run(fn):
    return await asyncio.get_event_loop().run_in_executor(None, fn)


@app.get("/")
async def root():
    return {"message": "QSD Engine", "status": "running"}


@app.get("/health", response_model=HealthResponse)
async def health_check():
    services = {"qsd_engine": "healthy"}
    try:
        await get_run_store().list_runs(command="__health__")
        services["database"] = "healthy"
    except Exception as e:
        services["database"] = f"error: {str(e)}"
    return HealthResponse(
        status="healthy" if all(v == "healthy" for v in services.values()) else "degraded",
        services=services,
    )


@app.post("/solve", response_model=RunResponse)
async def solve(request: SolveRequest):
    """Lowest eigenvalue of the operator in the given subspace"""
    try:
        def _solve():
            op = parse_term_list(request.operator)
            subspace = read_bitstrings(request.bitstrings, op.num_qubits).to_subspace()
            opts = workflow.solve_options(
                tol=request.tol,
                max_iter=request.max_iter,
                initial_vector=request.initial_vector,
                preconditioner=request.preconditioner,
            )
            return workflow.solve(
                op,
                subspace,
                matrix_free=request.matrix_free,
                mode=request.mode,
                lower_only=request.lower_only,
                trim_tol=request.trim_tol,
                opts=opts,
                threads=get_settings().threads,
            )

        outcome = await _run(_solve)
        report = outcome.report.model_dump(exclude_none=True)
        run_id = await get_run_store().store_run("solve", report) if request.record else None
        logger.info("solve: dim=%d eigenvalue=%.12g", outcome.report.dim, outcome.result.eigenvalue)
        return RunResponse(run_id=run_id, report=report)
    except Exception as e:
        raise _http_error(e)


@app.post("/ramps", response_model=RampsResponse)
async def ramps(request: RampsRequest):
    """Select bit-strings perturbatively from the seeds, optionally solving on the result"""
    try:
        def _ramps():
            op = parse_term_list(request.operator)
            seeds = read_bitstrings(request.seeds, op.num_qubits).to_subspace()
            full = (
                read_bitstrings(request.full_subspace, op.num_qubits).to_subspace()
                if request.full_subspace is not None
                else None
            )
            outcome = workflow.ramps(
                op,
                seeds,
                tolerance=request.tol,
                restrict_to=full,
                max_depth=request.max_depth,
                energy=request.energy,
                run_solve=request.solve,
                threads=get_settings().threads,
            )
            return op, outcome

        op, outcome = await _run(_ramps)
        report = outcome.report.model_dump(exclude_none=True)
        run_id = await get_run_store().store_run("ramps", report) if request.record else None
        bitstrings = [format_bitstring(b, op.num_qubits) for b in outcome.result.subspace]
        return RampsResponse(run_id=run_id, report=report, bitstrings=bitstrings)
    except Exception as e:
        raise _http_error(e)


@app.post("/jordan-wigner", response_model=JordanWignerResponse)
async def jordan_wigner(request: JordanWignerRequest):
    """FCIDUMP integrals to an extended-alphabet (or Pauli) term list"""
    try:
        op = await _run(lambda: workflow.fermion_to_qubit(request.fcidump, pauli=request.pauli))
        return JordanWignerResponse(operator=emit_term_list(op), num_qubits=op.num_qubits, num_terms=len(op))
    except Exception as e:
        raise _http_error(e)


@app.get("/runs")
async def list_runs(command: Optional[str] = None):
    """List stored runs, newest first"""
    try:
        runs = await get_run_store().list_runs(command)
        return {"runs": runs}
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Failed to list runs: {str(e)}")


@app.get("/runs/{run_id}")
async def get_run(run_id: int):
    """Retrieve a specific run by ID"""
    try:
        run = await get_run_store().get_run(run_id)
        if not run:
            raise HTTPException(status_code=404, detail="Run not found")
        return run
    except Exception as e:
        raise _http_error(e)


@app.delete("/runs/{run_id}")
async def delete_run(run_id: int):
    """Delete a specific run"""
    try:
        success = await get_run_store().delete_run(run_id)
        if not success:
            raise HTTPException(status_code=404, detail="Run not found")
        return {"message": "Run deleted successfully"}
    except Exception as e:
        raise _http_error(e)


if __name__ == "__main__":
    import uvicorn

    config = get_settings()
    setup_logging()
    logger.info("Starting QSD Engine on http://%s:%d", config.host, config.port)
    logger.info("Run database: %s", config.run_db_path)

    uvicorn.run(app, host=config.host, port=config.port)
