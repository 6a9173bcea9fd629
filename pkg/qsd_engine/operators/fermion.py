"""
Second-quantized fermionic operators and their normalization onto the
extended alphabet {Lower, Raise, P0, P1}.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from ..utils.errors import ValidationError
from .alphabet import OpCode, merge_pair
from .qubit import QubitTerm

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FermionTerm:
    """Product f^(d0)_(m0) f^(d1)_(m1) ... read left to right; True marks a creation operator"""

    coefficient: complex
    mode_indices: Tuple[int, ...]
    dagger_flags: Tuple[bool, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficient", complex(self.coefficient))
        object.__setattr__(self, "mode_indices", tuple(int(m) for m in self.mode_indices))
        object.__setattr__(self, "dagger_flags", tuple(bool(d) for d in self.dagger_flags))
        if len(self.mode_indices) != len(self.dagger_flags):
            raise ValidationError("mode_indices and dagger_flags must have the same length")
        if any(m < 0 for m in self.mode_indices):
            raise ValidationError(f"negative mode index in {self.mode_indices}")

    @classmethod
    def from_ops(cls, coefficient: complex, ops: Sequence[Tuple[int, bool]]) -> "FermionTerm":
        return cls(coefficient, tuple(m for m, _ in ops), tuple(d for _, d in ops))

    @classmethod
    def from_extended(cls, term: QubitTerm) -> "FermionTerm":
        """Rewrite a normalized extended term as ladder operators (P1 = f^+ f, P0 = f f^+)"""
        ops: List[Tuple[int, bool]] = []
        for index, code in zip(term.indices, term.codes):
            if code == OpCode.RAISE:
                ops.append((index, True))
            elif code == OpCode.LOWER:
                ops.append((index, False))
            elif code == OpCode.P1:
                ops.extend([(index, True), (index, False)])
            elif code == OpCode.P0:
                ops.extend([(index, False), (index, True)])
            else:
                raise ValidationError(f"{code.name} has no fermionic counterpart")
        return cls.from_ops(term.coefficient, ops)

    @property
    def max_mode(self) -> int:
        return max(self.mode_indices) if self.mode_indices else -1

    def adjoint(self) -> "FermionTerm":
        return FermionTerm(
            self.coefficient.conjugate(),
            tuple(reversed(self.mode_indices)),
            tuple(not d for d in reversed(self.dagger_flags)),
        )


def _permutation_sign(indices: Sequence[int]) -> int:
    """Sign of stably sorting indices, counting only swaps of distinct indices"""
    inversions = 0
    for a in range(len(indices)):
        for b in range(a + 1, len(indices)):
            if indices[a] > indices[b]:
                inversions += 1
    return -1 if inversions % 2 else 1


def normalize(term: FermionTerm) -> Optional[QubitTerm]:
    """
    Sort ladder operators into ascending mode order, tracking the
    anti-commutation sign, then merge operators on repeated modes. Returns
    the extended-alphabet term (ascending indices, one symbol per index) or
    None when the product vanishes.
    """
    symbols = [OpCode.RAISE if d else OpCode.LOWER for d in term.dagger_flags]
    sign = _permutation_sign(term.mode_indices)
    order = sorted(range(len(symbols)), key=lambda k: term.mode_indices[k])

    indices: List[int] = []
    codes: List[OpCode] = []
    for k in order:
        mode, symbol = term.mode_indices[k], symbols[k]
        if indices and indices[-1] == mode:
            merged = merge_pair(codes[-1], symbol)
            if merged is None:
                return None
            codes[-1] = merged
        else:
            indices.append(mode)
            codes.append(symbol)

    return QubitTerm(sign * term.coefficient, tuple(indices), tuple(codes))


@dataclass(frozen=True)
class FermionOperator:
    constant: float
    terms: Tuple[FermionTerm, ...]
    num_modes: int

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "constant", float(self.constant))
        for term in self.terms:
            if term.max_mode >= self.num_modes:
                raise ValidationError(
                    f"term acts on mode {term.max_mode} but the operator has {self.num_modes} modes"
                )

    @classmethod
    def build(cls, terms: Iterable[FermionTerm], num_modes: int, constant: float = 0.0) -> "FermionOperator":
        """Create an operator, folding identity terms into the constant"""
        kept = []
        for term in terms:
            if term.mode_indices:
                kept.append(term)
                continue
            if abs(term.coefficient.imag) > 0:
                raise ValidationError("the constant offset of a fermionic operator must be real")
            constant += term.coefficient.real
        return cls(constant, tuple(kept), num_modes)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[FermionTerm]:
        return iter(self.terms)

    def __add__(self, other: "FermionOperator") -> "FermionOperator":
        if not isinstance(other, FermionOperator):
            return NotImplemented
        return FermionOperator(
            self.constant + other.constant,
            self.terms + other.terms,
            max(self.num_modes, other.num_modes),
        )

    def normalized_terms(self) -> List[QubitTerm]:
        """Normalized extended terms, null products dropped"""
        result = []
        dropped = 0
        for term in self.terms:
            normal = normalize(term)
            if normal is None:
                dropped += 1
            else:
                result.append(normal)
        if dropped:
            logger.debug("dropped %d null fermionic terms during normalization", dropped)
        return result
