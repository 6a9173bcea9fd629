"""
Extended single-qubit alphabet: Pauli Z, X, Y, projectors P0/P1 and the
ladder operators Lower (|0><1|) and Raise (|1><0|).
"""

from enum import IntEnum
from typing import Dict, Optional, Tuple

import numpy as np


class OpCode(IntEnum):
    Z = 0
    P0 = 1
    P1 = 2
    X = 3
    Y = 4
    LOWER = 5
    RAISE = 6

    @property
    def is_off_diagonal(self) -> bool:
        return self > 2

    @property
    def is_ladder(self) -> bool:
        return self in (OpCode.LOWER, OpCode.RAISE)

    @property
    def symbol(self) -> str:
        return SYMBOLS[self]


SYMBOLS: Dict[OpCode, str] = {
    OpCode.Z: "Z",
    OpCode.P0: "P0",
    OpCode.P1: "P1",
    OpCode.X: "X",
    OpCode.Y: "Y",
    OpCode.LOWER: "-",
    OpCode.RAISE: "+",
}

# Y|0> = i|1>, Y|1> = -i|0>
MATRICES: Dict[OpCode, np.ndarray] = {
    OpCode.Z: np.array([[1, 0], [0, -1]], dtype=complex),
    OpCode.P0: np.array([[1, 0], [0, 0]], dtype=complex),
    OpCode.P1: np.array([[0, 0], [0, 1]], dtype=complex),
    OpCode.X: np.array([[0, 1], [1, 0]], dtype=complex),
    OpCode.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    OpCode.LOWER: np.array([[0, 1], [0, 0]], dtype=complex),
    OpCode.RAISE: np.array([[0, 0], [1, 0]], dtype=complex),
}

L, R, P0, P1 = OpCode.LOWER, OpCode.RAISE, OpCode.P0, OpCode.P1

# Product left*right of two single-mode operators; None marks a null product.
MERGE_TABLE: Dict[Tuple[OpCode, OpCode], Optional[OpCode]] = {
    (L, L): None,
    (R, L): P1,
    (P0, L): L,
    (P1, L): None,
    (L, R): P0,
    (R, R): None,
    (P0, R): None,
    (P1, R): R,
    (L, P0): None,
    (R, P0): R,
    (P0, P0): P0,
    (P1, P0): None,
    (L, P1): L,
    (R, P1): None,
    (P0, P1): None,
    (P1, P1): P1,
}

# Sign picked up when a single-mode symbol is multiplied by Z on its right
Z_RIGHT_SIGN: Dict[OpCode, int] = {L: -1, R: 1, P0: 1, P1: -1}


def merge_pair(left: OpCode, right: OpCode) -> Optional[OpCode]:
    """Merge two operators acting on the same mode, left applied after right"""
    return MERGE_TABLE[(OpCode(left), OpCode(right))]
