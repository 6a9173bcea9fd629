"""
Extended-alphabet Jordan-Wigner transform.

With f_j = Lower_j Z_(j-1) ... Z_0, a normalized fermionic term (ascending
modes, one symbol per mode) maps to a single qubit term. Each ladder operator
contributes a Z string on every qubit below it; walking down from the highest
mode, qubits covered by an odd number of strings either gain a Z (no symbol
there) or absorb it into their symbol (symbol * Z = sign * symbol).
"""

import logging
from typing import List, Tuple

from ..utils.errors import ValidationError
from .alphabet import OpCode, Z_RIGHT_SIGN
from .fermion import FermionOperator
from .qubit import QubitOperator, QubitTerm, combine_like_terms

logger = logging.getLogger(__name__)


def transform_term(term: QubitTerm) -> QubitTerm:
    """Map one normalized fermionic term onto its qubit counterpart"""
    pairs: List[Tuple[int, OpCode]] = []
    coefficient = term.coefficient
    parity = 0
    count = len(term.indices)

    for position in reversed(range(count)):
        index, code = term.indices[position], term.codes[position]
        upper = term.indices[position + 1] if position + 1 < count else index + 1
        if parity:
            pairs.extend((q, OpCode.Z) for q in range(index + 1, upper))
            coefficient *= Z_RIGHT_SIGN[code]
        pairs.append((index, code))
        if code.is_ladder:
            parity ^= 1

    if parity and count:
        pairs.extend((q, OpCode.Z) for q in range(term.indices[0]))

    return QubitTerm.from_pairs(coefficient, pairs)


def jordan_wigner(op: FermionOperator, drop_tol: float = 0.0, threads: int = 1) -> QubitOperator:
    """Transform a fermionic operator into a combined extended-alphabet qubit operator"""
    terms = []
    for normal in op.normalized_terms():
        if normal.max_index >= op.num_modes:
            raise ValidationError(f"mode {normal.max_index} out of range for {op.num_modes} modes")
        terms.append(transform_term(normal))

    if op.constant != 0.0:
        terms.append(QubitTerm(op.constant, (), ()))

    qubit_op = QubitOperator(tuple(terms), op.num_modes, fermionic=True)
    combined = combine_like_terms(qubit_op, drop_tol=drop_tol, threads=threads)
    logger.info(
        "Jordan-Wigner: %d fermionic terms -> %d qubit terms on %d qubits",
        len(op.terms),
        len(combined),
        op.num_modes,
    )
    return combined
