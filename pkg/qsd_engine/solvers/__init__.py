"""Eigensolver and perturbative subspace selection"""

from .eigensolver import SolveOptions, SolveResult, solve_lowest
from .ramps import RampsConfig, RampsResult, ramps, ramps_search

__all__ = [
    "SolveOptions",
    "SolveResult",
    "solve_lowest",
    "RampsConfig",
    "RampsResult",
    "ramps",
    "ramps_search",
]
