"""
Matrix-element evaluation over bit-string rows.

Each term is compiled once into integer masks. For a row bit-string r the
term's element <r|W|r ^ mask> is nonzero only when every P1/Raise position
holds a 1 and every P0/Lower position holds a 0; the value is then the base
coefficient times (-1) for every set bit of r on a Z or Y position. Y also
contributes a constant -i, folded into the base.
"""

import logging
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from ..operators.alphabet import OpCode
from ..operators.qubit import QubitTerm
from ..subspace.bitstring import BitString, structure_mask
from ..subspace.subspace import Subspace
from ..utils.parallel import map_chunks
from .grouping import GroupedHamiltonian, row_ladder_integer

logger = logging.getLogger(__name__)

_MINUS_I_POWERS = (1, -1j, -1, 1j)


class CompiledTerm(NamedTuple):
    value: complex
    sign_mask: int
    ones_mask: int
    zeros_mask: int

    def evaluate(self, row: BitString) -> complex:
        if row & self.ones_mask != self.ones_mask or row & self.zeros_mask:
            return 0.0
        if (row & self.sign_mask).bit_count() & 1:
            return -self.value
        return self.value


def compile_term(term: QubitTerm) -> CompiledTerm:
    sign_mask = ones_mask = zeros_mask = 0
    num_y = 0
    for index, code in zip(term.indices, term.codes):
        bit = 1 << index
        if code == OpCode.Z:
            sign_mask |= bit
        elif code == OpCode.Y:
            sign_mask |= bit
            num_y += 1
        elif code in (OpCode.P1, OpCode.RAISE):
            ones_mask |= bit
        elif code in (OpCode.P0, OpCode.LOWER):
            zeros_mask |= bit
    value = term.coefficient * _MINUS_I_POWERS[num_y % 4]
    if value.imag == 0.0:
        value = value.real
    return CompiledTerm(value, sign_mask, ones_mask, zeros_mask)


@dataclass(frozen=True)
class CompiledGroup:
    mask: int
    msob: int
    structure: Tuple[int, ...]
    start: int
    stop: int
    buckets: Optional[Tuple[int, ...]]


@dataclass(frozen=True)
class CompiledHamiltonian:
    diagonal: Tuple[CompiledTerm, ...]
    offdiag: Tuple[CompiledTerm, ...]
    groups: Tuple[CompiledGroup, ...]
    is_real: bool
    diagonal_is_real: bool

    @classmethod
    def from_grouped(cls, gh: GroupedHamiltonian) -> "CompiledHamiltonian":
        diagonal = tuple(compile_term(t) for t in gh.diagonal_terms)
        offdiag = tuple(compile_term(t) for t in gh.offdiag_terms)
        groups = []
        for g, structure in enumerate(gh.group_structures):
            groups.append(
                CompiledGroup(
                    mask=structure_mask(structure),
                    msob=int(gh.group_msob[g]),
                    structure=structure,
                    start=int(gh.group_ptrs[g]),
                    stop=int(gh.group_ptrs[g + 1]),
                    buckets=tuple(int(p) for p in gh.int_ptrs[g]) if gh.int_ptrs is not None else None,
                )
            )
        diagonal_is_real = all(isinstance(t.value, float) for t in diagonal)
        is_real = diagonal_is_real and all(isinstance(t.value, float) for t in offdiag)
        return cls(diagonal, offdiag, tuple(groups), is_real, diagonal_is_real)

    def term_range(self, group: CompiledGroup, row: BitString, use_ladder_buckets: bool = True) -> Tuple[int, int]:
        """Terms of `group` that can contribute to `row`"""
        if group.buckets is None or not use_ladder_buckets:
            return group.start, group.stop
        ladder = row_ladder_integer(row, group.structure)
        return group.buckets[ladder], group.buckets[ladder + 1]

    def group_value(self, start: int, stop: int, row: BitString) -> complex:
        total = 0.0
        for term in self.offdiag[start:stop]:
            total += term.evaluate(row)
        return total

    def diagonal_value(self, row: BitString) -> complex:
        total = 0.0
        for term in self.diagonal:
            total += term.evaluate(row)
        return total


@dataclass(frozen=True)
class DiagonalCache:
    values: np.ndarray

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, index: int):
        return self.values[index]

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.values)

    def argmin(self) -> int:
        return int(np.argmin(np.real(self.values)))


def diagonal_value(gh: GroupedHamiltonian, row: BitString) -> complex:
    """<row|H_diag|row> for any bit-string, member of a subspace or not"""
    return gh.compiled.diagonal_value(row)


def compute_diagonal(gh: GroupedHamiltonian, subspace: Subspace, threads: int = 1) -> DiagonalCache:
    compiled = gh.compiled
    dtype = np.float64 if compiled.diagonal_is_real else np.complex128

    def block(start: int, stop: int) -> np.ndarray:
        out = np.empty(stop - start, dtype=dtype)
        for i in range(start, stop):
            out[i - start] = compiled.diagonal_value(subspace[i])
        return out

    blocks = map_chunks(block, subspace.dim, threads)
    values = np.concatenate(blocks) if blocks else np.zeros(0, dtype=dtype)
    logger.debug("diagonal cache: %d entries", len(values))
    return DiagonalCache(values)


def msob_is_lower(row: BitString, group_msob: int) -> bool:
    """Flipping a set MSOB lowers the column's integer value, so the entry is below the diagonal"""
    return bool((row >> group_msob) & 1)


def group_element(
    gh: GroupedHamiltonian,
    g: int,
    row: BitString,
    col: Optional[BitString] = None,
    use_ladder_buckets: bool = True,
) -> complex:
    """Element <row|H_g|col> of a single group; zero means no entry"""
    compiled = gh.compiled
    group = compiled.groups[g]
    if col is not None and col != row ^ group.mask:
        return 0.0
    start, stop = compiled.term_range(group, row, use_ladder_buckets)
    return compiled.group_value(start, stop, row)


def row_entries(
    compiled: CompiledHamiltonian,
    subspace: Subspace,
    row: BitString,
    lower_only: bool = False,
    use_ladder_buckets: bool = True,
) -> Tuple[List[int], List[complex]]:
    """
    Off-diagonal (column index, value) pairs of one row in fixed group order.
    With lower_only, groups whose MSOB test puts the column above the
    diagonal are skipped.
    """
    columns: List[int] = []
    values: List[complex] = []
    contains = subspace.contains
    for group in compiled.groups:
        if lower_only and not (row >> group.msob) & 1:
            continue
        start, stop = compiled.term_range(group, row, use_ladder_buckets)
        if start == stop:
            continue
        j = contains(row ^ group.mask)
        if j is None:
            continue
        value = compiled.group_value(start, stop, row)
        if value == 0:
            continue
        columns.append(j)
        values.append(value)
    return columns, values

