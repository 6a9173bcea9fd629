"""
Partition a qubit operator into its diagonal part and groups of off-diagonal
terms that share an off-diagonal structure.

Off-diagonal terms are stably sorted by (off-diagonal weight, structure) so
every group is a contiguous run delimited by `group_ptrs`. For operators that
come from fermionic systems the terms of each group are further sorted by
ladder integer and `int_ptrs[g]` records the bucket boundaries, so
terms with ladder integer v sit in [int_ptrs[g][v], int_ptrs[g][v + 1]).
"""

import logging
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..operators.alphabet import OpCode
from ..operators.qubit import QubitOperator, QubitTerm, off_diagonal_structure
from ..subspace.bitstring import BitString
from ..utils.errors import AlphabetError, ValidationError
from ..utils.parallel import map_items

logger = logging.getLogger(__name__)

MAX_LADDER_OPS = 4
NUM_LADDER_BUCKETS = 2 ** MAX_LADDER_OPS
INT_PTRS_WIDTH = NUM_LADDER_BUCKETS + 1


@dataclass(frozen=True, eq=False)
class GroupedHamiltonian:
    diagonal_terms: Tuple[QubitTerm, ...]
    offdiag_terms: Tuple[QubitTerm, ...]
    group_ptrs: np.ndarray
    group_structures: Tuple[Tuple[int, ...], ...]
    group_msob: np.ndarray
    int_ptrs: Optional[np.ndarray]
    num_qubits: int
    fermionic: bool = False

    @property
    def num_groups(self) -> int:
        return len(self.group_structures)

    def group_terms(self, g: int) -> Tuple[QubitTerm, ...]:
        return self.offdiag_terms[self.group_ptrs[g]:self.group_ptrs[g + 1]]

    def bucket_range(self, g: int, ladder: int) -> Tuple[int, int]:
        return int(self.int_ptrs[g, ladder]), int(self.int_ptrs[g, ladder + 1])

    @cached_property
    def compiled(self):
        from .evaluation import CompiledHamiltonian

        return CompiledHamiltonian.from_grouped(self)

    @property
    def is_real(self) -> bool:
        return self.compiled.is_real

    def to_operator(self) -> QubitOperator:
        """Reassemble the (permuted) operator"""
        return QubitOperator(self.diagonal_terms + self.offdiag_terms, self.num_qubits, self.fermionic)

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return self.to_operator().is_hermitian(tol)

    def select_groups(self, keep: Sequence[int]) -> "GroupedHamiltonian":
        """Sub-Hamiltonian with the diagonal part and only the listed groups"""
        terms: List[QubitTerm] = []
        ptrs = [0]
        int_ptrs = []
        for g in keep:
            start, stop = int(self.group_ptrs[g]), int(self.group_ptrs[g + 1])
            offset = len(terms) - start
            terms.extend(self.offdiag_terms[start:stop])
            ptrs.append(len(terms))
            if self.int_ptrs is not None:
                int_ptrs.append(self.int_ptrs[g] + offset)
        return replace(
            self,
            offdiag_terms=tuple(terms),
            group_ptrs=np.asarray(ptrs, dtype=np.int64),
            group_structures=tuple(self.group_structures[g] for g in keep),
            group_msob=np.asarray([self.group_msob[g] for g in keep], dtype=np.int64),
            int_ptrs=(
                np.asarray(int_ptrs, dtype=np.int64).reshape(len(keep), INT_PTRS_WIDTH)
                if self.int_ptrs is not None
                else None
            ),
        )


def ladder_integer(term: QubitTerm, structure: Sequence[int]) -> int:
    """Bit k is 1 iff the operator at structure[k] is Raise"""
    codes = dict(zip(term.indices, term.codes))
    value = 0
    for k, index in enumerate(structure):
        code = codes.get(index)
        if code not in (OpCode.LOWER, OpCode.RAISE):
            raise AlphabetError(f"term {term.label()} has no ladder operator at qubit {index}")
        if code == OpCode.RAISE:
            value |= 1 << k
    return value


def row_ladder_integer(row: BitString, structure: Sequence[int]) -> int:
    """Bit k is the row bit at structure[k]"""
    value = 0
    for k, index in enumerate(structure):
        value |= ((row >> index) & 1) << k
    return value


def _sort_bucket(terms: List[QubitTerm]) -> List[Tuple[Tuple[int, ...], QubitTerm]]:
    keyed = [(off_diagonal_structure(t), t) for t in terms]
    keyed.sort(key=lambda pair: pair[0])
    return keyed


def group_terms(op: QubitOperator, fermionic: Optional[bool] = None, threads: int = 1) -> GroupedHamiltonian:
    """Split op into a diagonal part and contiguous off-diagonal groups"""
    fermionic = op.fermionic if fermionic is None else fermionic

    diagonal: List[QubitTerm] = []
    by_weight: Dict[int, List[QubitTerm]] = {}
    for term in op.terms:
        weight = term.off_diagonal_weight
        if weight == 0:
            diagonal.append(term)
            continue
        if fermionic:
            bad = [c for c in term.codes if c in (OpCode.X, OpCode.Y)]
            if bad:
                raise AlphabetError(
                    f"fermionic operator contains {bad[0].name} in term {term.label()}; "
                    "only Z, P0, P1, -, + are allowed"
                )
            if weight > MAX_LADDER_OPS:
                raise ValidationError(
                    f"term {term.label()} has {weight} ladder operators, at most {MAX_LADDER_OPS} supported"
                )
        by_weight.setdefault(weight, []).append(term)

    weights = sorted(by_weight)
    sorted_buckets = map_items(_sort_bucket, [by_weight[w] for w in weights], threads)

    offdiag: List[QubitTerm] = []
    ptrs = [0]
    structures: List[Tuple[int, ...]] = []
    int_ptrs: List[np.ndarray] = []
    for bucket in sorted_buckets:
        position = 0
        while position < len(bucket):
            structure = bucket[position][0]
            end = position
            while end < len(bucket) and bucket[end][0] == structure:
                end += 1
            members = [t for _, t in bucket[position:end]]
            start = len(offdiag)
            if fermionic:
                ladders = [ladder_integer(t, structure) for t in members]
                order = sorted(range(len(members)), key=lambda k: ladders[k])
                members = [members[k] for k in order]
                ladders = np.asarray([ladders[k] for k in order], dtype=np.int64)
                bounds = np.searchsorted(ladders, np.arange(INT_PTRS_WIDTH), side="left")
                int_ptrs.append(bounds.astype(np.int64) + start)
            offdiag.extend(members)
            ptrs.append(len(offdiag))
            structures.append(structure)
            position = end

    grouped = GroupedHamiltonian(
        diagonal_terms=tuple(diagonal),
        offdiag_terms=tuple(offdiag),
        group_ptrs=np.asarray(ptrs, dtype=np.int64),
        group_structures=tuple(structures),
        group_msob=np.asarray([s[-1] for s in structures], dtype=np.int64),
        int_ptrs=(np.asarray(int_ptrs, dtype=np.int64).reshape(len(structures), INT_PTRS_WIDTH) if fermionic else None),
        num_qubits=op.num_qubits,
        fermionic=fermionic,
    )
    logger.info(
        "grouped %d terms: %d diagonal, %d off-diagonal in %d groups%s",
        len(op.terms),
        len(diagonal),
        len(offdiag),
        grouped.num_groups,
        " (fermionic)" if fermionic else "",
    )
    return grouped


def smallest_splitting(diagonal: np.ndarray) -> float:
    """Smallest nonzero gap between distinct diagonal values, 0 if all equal"""
    values = np.unique(np.real(np.asarray(diagonal)))
    if values.size < 2:
        return 0.0
    gaps = np.diff(values)
    gaps = gaps[gaps > 0]
    return float(gaps.min()) if gaps.size else 0.0


def trim_groups(gh: GroupedHamiltonian, diagonal: np.ndarray, tol: float) -> GroupedHamiltonian:
    """
    Drop whole off-diagonal groups whose largest |coefficient| divided by the
    smallest diagonal splitting in the subspace falls below tol.
    """
    if tol <= 0 or gh.num_groups == 0:
        return gh
    splitting = smallest_splitting(diagonal)
    if splitting == 0.0:
        logger.warning("all diagonal entries are equal; group trimming disabled")
        return gh

    keep = []
    for g in range(gh.num_groups):
        magnitude = max((abs(t.coefficient) for t in gh.group_terms(g)), default=0.0)
        if magnitude / splitting >= tol:
            keep.append(g)

    logger.info(
        "trimmed %d of %d groups (tol=%g, smallest splitting=%g)",
        gh.num_groups - len(keep),
        gh.num_groups,
        tol,
        splitting,
    )
    return gh.select_groups(keep)
