"""
Open (or periodic) XXZ spin chain and Neel-state subspaces for it
"""

import itertools
import logging
from typing import List, Literal, Set

from ..operators.alphabet import OpCode
from ..operators.qubit import QubitOperator, QubitTerm
from ..subspace.bitstring import BitString
from ..subspace.subspace import Subspace
from ..utils.errors import ValidationError

logger = logging.getLogger(__name__)

Correction = Literal["expand", "snap", "discard"]
CORRECTIONS = ("expand", "snap", "discard")


def heisenberg_xxz(L: int, J: float = 0.3, periodic: bool = False) -> QubitOperator:
    """sum_i J (X_i X_i+1 + Y_i Y_i+1) + Z_i Z_i+1"""
    if L < 2:
        raise ValidationError(f"chain length must be >= 2, got {L}")
    bonds = [(i, i + 1) for i in range(L - 1)]
    if periodic and L >= 3:
        bonds.append((L - 1, 0))
    terms = []
    for a, b in bonds:
        terms.append(QubitTerm.from_pairs(J, [(a, OpCode.X), (b, OpCode.X)]))
        terms.append(QubitTerm.from_pairs(J, [(a, OpCode.Y), (b, OpCode.Y)]))
        terms.append(QubitTerm.from_pairs(1.0, [(a, OpCode.Z), (b, OpCode.Z)]))
    return QubitOperator(tuple(terms), L)


def neel_state(L: int) -> BitString:
    """|..0101>, qubit 0 set"""
    if L < 1:
        raise ValidationError(f"chain length must be >= 1, got {L}")
    return sum(1 << i for i in range(0, L, 2))


def _single_flips(bits: BitString, L: int, set_bits: bool) -> List[BitString]:
    """Strings one flip away that clear a set bit (set_bits) or set a clear bit"""
    return [bits ^ (1 << i) for i in range(L) if ((bits >> i) & 1) == set_bits]


def neel_subspace(L: int, hamming: int = 1, correction: Correction = "expand") -> Subspace:
    """
    Bit-strings within `hamming` flips of the Neel state. Strings whose
    magnetization differs from the Neel state's are corrected: expand
    replaces a string off by one unit with every equal-magnetization string
    one flip away, snap maps it to the Neel state, discard drops it.
    """
    if hamming < 0:
        raise ValidationError(f"hamming distance must be >= 0, got {hamming}")
    if correction not in CORRECTIONS:
        raise ValidationError(f"unknown correction {correction!r}, expected one of {CORRECTIONS}")

    neel = neel_state(L)
    target = neel.bit_count()
    found: Set[BitString] = set()
    for distance in range(1, min(hamming, L) + 1):
        for positions in itertools.combinations(range(L), distance):
            bits = neel
            for i in positions:
                bits ^= 1 << i
            excess = bits.bit_count() - target
            if excess == 0:
                found.add(bits)
            elif correction == "expand" and abs(excess) == 1:
                found.update(_single_flips(bits, L, set_bits=excess > 0))
            elif correction == "snap":
                found.add(neel)

    found.discard(neel)
    subspace = Subspace([neel] + sorted(found), L)
    logger.info("Neel subspace: L=%d hamming=%d correction=%s -> %d strings", L, hamming, correction, subspace.dim)
    return subspace
