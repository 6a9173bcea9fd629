"""
JSON run reports. Keys appear in declaration order; timings_ms is the only
field that differs between otherwise identical runs.
"""

from typing import Dict, Optional

from pydantic import BaseModel, Field


class RunReport(BaseModel):
    eigenvalue: Optional[float] = None
    residual: Optional[float] = None
    iterations: Optional[int] = None
    converged: Optional[bool] = None
    dim: int
    nnz: Optional[int] = None
    num_groups: int
    num_groups_after_trim: int
    timings_ms: Dict[str, float] = Field(default_factory=dict)
    mode: str
    ramps_subspace_dim: Optional[int] = None
    ramps_depth_reached: Optional[int] = None
    ramps_degenerate_skipped: Optional[int] = None
    num_qubits: Optional[int] = None
    lower_only: Optional[bool] = None
    output: Optional[str] = None


def emit_report(report: RunReport) -> str:
    return report.model_dump_json(indent=2, exclude_none=True)
