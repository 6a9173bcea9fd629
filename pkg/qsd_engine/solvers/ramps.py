"""
Perturbative subspace selection.

Starting from seed bit-strings with prefactor 1/|E|, each level visits the
bit-strings reachable through one off-diagonal group. A candidate b_k
reached from b_j is admitted when

    amp = prefactor_j * |H_jk|^2 / |E - H_kk|  >  tol

and is expanded at the next level with prefactor amp / |E - H_kk|. A string
is expanded again at a later level only if it arrives with a larger
prefactor than before, which keeps the selected set independent of visiting
order and monotone in tol.

Candidates with |E - H_kk| below degeneracy_rel * max(|E|, max|H_kk|) are
skipped. max|H_kk| runs over the restriction subspace when one is given,
otherwise over the seeds and every candidate visited so far; it is updated
between levels so the result does not depend on the thread count.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..hamiltonian.evaluation import CompiledHamiltonian
from ..hamiltonian.grouping import GroupedHamiltonian
from ..subspace.bitstring import BitString
from ..subspace.subspace import Subspace
from ..utils.errors import ValidationError
from ..utils.parallel import map_items, row_chunks

logger = logging.getLogger(__name__)


class RampsConfig(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    target_energy: float
    tolerance: float = Field(gt=0.0)
    max_depth: int = Field(default=4, ge=1)
    restrict_to: Optional[Subspace] = None
    degeneracy_rel: float = Field(default=1e-10, ge=0.0)
    threads: int = Field(default=1, ge=1)

    @field_validator("target_energy")
    @classmethod
    def check_energy(cls, value: float) -> float:
        if value == 0.0 or not np.isfinite(value):
            raise ValueError("target energy must be finite and nonzero")
        return value


@dataclass
class RampsResult:
    subspace: Subspace
    num_seeds: int
    num_admitted: int
    depth_reached: int
    degenerate_skipped: int

    @property
    def dim(self) -> int:
        return self.subspace.dim


class _Diagonal:
    """Memoized diagonal values for arbitrary bit-strings"""

    def __init__(self, compiled: CompiledHamiltonian):
        self.compiled = compiled
        self.values: Dict[BitString, float] = {}

    def __call__(self, bits: BitString) -> float:
        value = self.values.get(bits)
        if value is None:
            value = float(np.real(self.compiled.diagonal_value(bits)))
            self.values[bits] = value
        return value


def _reference_scale(diagonal: _Diagonal, seeds: Subspace, cfg: RampsConfig) -> float:
    """Largest |H_kk| known before the search starts"""
    reference = cfg.restrict_to if cfg.restrict_to is not None else seeds
    return max((abs(diagonal(b)) for b in reference), default=0.0)


def ramps_search(gh: GroupedHamiltonian, seeds: Subspace, cfg: RampsConfig) -> RampsResult:
    """Select bit-strings whose chained second-order amplitudes exceed the tolerance"""
    restrict = cfg.restrict_to
    if restrict is not None:
        if restrict.num_qubits != seeds.num_qubits:
            raise ValidationError(
                f"restriction subspace has width {restrict.num_qubits}, seeds have {seeds.num_qubits}"
            )
        missing = [b for b in seeds if b not in restrict]
        if missing:
            raise ValidationError(f"{len(missing)} seed bit-strings are not in the restriction subspace")

    compiled = gh.compiled
    diagonal = _Diagonal(compiled)
    energy = cfg.target_energy
    tol = cfg.tolerance
    largest = _reference_scale(diagonal, seeds, cfg)
    seed_set = set(seeds)

    def expand(frontier: List[tuple]) -> Dict[BitString, tuple]:
        # col -> (largest prefactor * |H_jk|^2 over the rows reaching it, H_kk)
        found: Dict[BitString, tuple] = {}
        for row, prefactor in frontier:
            for group in compiled.groups:
                start, stop = compiled.term_range(group, row)
                if start == stop:
                    continue
                col = row ^ group.mask
                if col in seed_set:
                    continue
                if restrict is not None and restrict.contains(col) is None:
                    continue
                element = compiled.group_value(start, stop, row)
                if element == 0:
                    continue
                weight = prefactor * abs(element) ** 2
                previous = found.get(col)
                if previous is None or weight > previous[0]:
                    found[col] = (weight, diagonal(col))
        return found

    best: Dict[BitString, float] = {}
    degenerate_all = set()
    frontier = [(b, 1.0 / abs(energy)) for b in seeds]
    depth = 0
    floor = cfg.degeneracy_rel * max(abs(energy), largest)
    while frontier and depth < cfg.max_depth:
        depth += 1
        blocks = [frontier[start:stop] for start, stop in row_chunks(len(frontier), cfg.threads)]
        merged: Dict[BitString, tuple] = {}
        for found in map_items(expand, blocks, cfg.threads):
            for col, entry in found.items():
                if col not in merged or entry[0] > merged[col][0]:
                    merged[col] = entry

        # the floor follows every diagonal seen so far, updated once per level
        if merged:
            largest = max(largest, max(abs(value) for _, value in merged.values()))
        floor = cfg.degeneracy_rel * max(abs(energy), largest)

        frontier = []
        for col in sorted(merged):
            weight, value = merged[col]
            gap = abs(energy - value)
            if gap < floor:
                degenerate_all.add(col)
                continue
            amplitude = weight / gap
            if amplitude <= tol:
                continue
            following = amplitude / gap
            if following > best.get(col, 0.0):
                best[col] = following
                frontier.append((col, following))
        logger.debug("level %d: %d candidates, %d to expand, %d admitted", depth, len(merged), len(frontier), len(best))

    degenerate_all -= set(best)
    if degenerate_all:
        logger.warning(
            "skipped %d near-degenerate candidates (|E - H_kk| < %.3e); "
            "the perturbative expansion is unreliable there, consider a larger seed subspace",
            len(degenerate_all),
            floor,
        )

    admitted = sorted(best)
    subspace = Subspace(list(seeds) + admitted, seeds.num_qubits)
    logger.info(
        "ramps: %d seeds + %d admitted = %d (tol=%g, depth %d)",
        seeds.dim,
        len(admitted),
        subspace.dim,
        tol,
        depth,
    )
    return RampsResult(
        subspace=subspace,
        num_seeds=seeds.dim,
        num_admitted=len(admitted),
        depth_reached=depth,
        degenerate_skipped=len(degenerate_all),
    )


def ramps(gh: GroupedHamiltonian, seeds: Subspace, cfg: RampsConfig) -> Subspace:
    return ramps_search(gh, seeds, cfg).subspace
