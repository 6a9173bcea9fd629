"""
Qubit operators over the extended alphabet.

Terms use a sparse encoding: only non-identity operators are stored, as
parallel tuples of strictly ascending qubit indices and operator codes.
A term with no indices is the identity (a constant offset).
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..utils.errors import ValidationError
from ..utils.parallel import map_items
from .alphabet import MATRICES, OpCode

logger = logging.getLogger(__name__)

# Dense matrices are a test oracle; beyond this they stop fitting in memory
MAX_DENSE_QUBITS = 14


@dataclass(frozen=True)
class QubitTerm:
    coefficient: complex
    indices: Tuple[int, ...]
    codes: Tuple[OpCode, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficient", complex(self.coefficient))
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))
        object.__setattr__(self, "codes", tuple(OpCode(c) for c in self.codes))
        if len(self.indices) != len(self.codes):
            raise ValidationError(
                f"term has {len(self.indices)} indices but {len(self.codes)} codes"
            )
        for a, b in zip(self.indices, self.indices[1:]):
            if a >= b:
                raise ValidationError(f"term indices must be strictly ascending, got {self.indices}")
        if self.indices and self.indices[0] < 0:
            raise ValidationError(f"negative qubit index in {self.indices}")

    @classmethod
    def from_pairs(cls, coefficient: complex, pairs: Iterable[Tuple[int, OpCode]]) -> "QubitTerm":
        """Build a term from (index, code) pairs given in any index order"""
        ordered = sorted(pairs, key=lambda pair: pair[0])
        return cls(coefficient, tuple(i for i, _ in ordered), tuple(c for _, c in ordered))

    @property
    def key(self) -> Tuple[Tuple[int, ...], Tuple[OpCode, ...]]:
        return (self.indices, self.codes)

    @property
    def weight(self) -> int:
        return len(self.codes)

    @property
    def off_diagonal_weight(self) -> int:
        return sum(1 for c in self.codes if c > 2)

    @property
    def is_diagonal(self) -> bool:
        return self.off_diagonal_weight == 0

    @property
    def max_index(self) -> int:
        return self.indices[-1] if self.indices else -1

    def scaled(self, factor: complex) -> "QubitTerm":
        return QubitTerm(self.coefficient * factor, self.indices, self.codes)

    def adjoint(self) -> "QubitTerm":
        swap = {OpCode.LOWER: OpCode.RAISE, OpCode.RAISE: OpCode.LOWER}
        codes = tuple(swap.get(c, c) for c in self.codes)
        return QubitTerm(self.coefficient.conjugate(), self.indices, codes)

    def label(self) -> str:
        ops = " ".join(f"{c.symbol}{i}" for i, c in zip(self.indices, self.codes))
        return f"({self.coefficient}) {ops}".strip()


def off_diagonal_structure(term: QubitTerm) -> Tuple[int, ...]:
    """Ascending indices where the term acts with an off-diagonal operator"""
    return tuple(i for i, c in zip(term.indices, term.codes) if c > 2)


@dataclass(frozen=True)
class QubitOperator:
    terms: Tuple[QubitTerm, ...]
    num_qubits: int
    fermionic: bool = field(default=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if self.num_qubits < 0:
            raise ValidationError(f"num_qubits must be >= 0, got {self.num_qubits}")
        for term in self.terms:
            if term.max_index >= self.num_qubits:
                raise ValidationError(
                    f"term {term.label()} acts on qubit {term.max_index} "
                    f"but the operator has {self.num_qubits} qubits"
                )

    @classmethod
    def zero(cls, num_qubits: int, fermionic: bool = False) -> "QubitOperator":
        return cls((), num_qubits, fermionic)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[QubitTerm]:
        return iter(self.terms)

    def __add__(self, other: "QubitOperator") -> "QubitOperator":
        if not isinstance(other, QubitOperator):
            return NotImplemented
        return QubitOperator(
            self.terms + other.terms,
            max(self.num_qubits, other.num_qubits),
            self.fermionic and other.fermionic,
        )

    def __mul__(self, factor: complex) -> "QubitOperator":
        return QubitOperator(tuple(t.scaled(factor) for t in self.terms), self.num_qubits, self.fermionic)

    __rmul__ = __mul__

    def __sub__(self, other: "QubitOperator") -> "QubitOperator":
        return self + (-1) * other

    def adjoint(self) -> "QubitOperator":
        return QubitOperator(tuple(t.adjoint() for t in self.terms), self.num_qubits, self.fermionic)

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        difference = combine_like_terms(self - self.adjoint(), drop_tol=tol)
        return len(difference) == 0

    def combine_like_terms(self, drop_tol: float = 0.0, threads: int = 1) -> "QubitOperator":
        return combine_like_terms(self, drop_tol=drop_tol, threads=threads)

    def codes_used(self) -> set:
        return {c for t in self.terms for c in t.codes}

    def to_dense(self) -> np.ndarray:
        return to_dense(self)

    def to_pauli(self) -> "QubitOperator":
        return to_pauli(self)


def _combine_bucket(terms: Sequence[QubitTerm]) -> List[QubitTerm]:
    sums: Dict[tuple, complex] = {}
    for term in terms:
        sums[term.key] = sums.get(term.key, 0j) + term.coefficient
    return [QubitTerm(coefficient, key[0], key[1]) for key, coefficient in sums.items()]


def combine_like_terms(op: QubitOperator, drop_tol: float = 0.0, threads: int = 1) -> QubitOperator:
    """
    Sum terms sharing (indices, codes). Terms are bucketed by weight and each
    bucket is combined independently; buckets are emitted in ascending weight,
    terms within a bucket in first-occurrence order. Terms with
    |coefficient| <= drop_tol are removed (the default only drops exact zeros).
    """
    buckets: Dict[int, List[QubitTerm]] = {}
    for term in op.terms:
        buckets.setdefault(term.weight, []).append(term)

    weights = sorted(buckets)
    combined = map_items(_combine_bucket, [buckets[w] for w in weights], threads)

    terms = [t for bucket in combined for t in bucket if abs(t.coefficient) > drop_tol]
    logger.debug("combined %d terms into %d over %d weight buckets", len(op.terms), len(terms), len(weights))
    return QubitOperator(tuple(terms), op.num_qubits, op.fermionic)


def term_to_dense(term: QubitTerm, num_qubits: int) -> np.ndarray:
    """Dense 2^n matrix of a single term; qubit 0 is the least significant bit"""
    factors = dict(zip(term.indices, term.codes))
    identity = np.eye(2, dtype=complex)
    matrix = np.ones((1, 1), dtype=complex)
    for q in reversed(range(num_qubits)):
        code = factors.get(q)
        matrix = np.kron(matrix, MATRICES[code] if code is not None else identity)
    return term.coefficient * matrix


def to_dense(op: QubitOperator) -> np.ndarray:
    if op.num_qubits > MAX_DENSE_QUBITS:
        raise ValidationError(f"dense matrices are limited to {MAX_DENSE_QUBITS} qubits")
    dim = 2 ** op.num_qubits
    matrix = np.zeros((dim, dim), dtype=complex)
    for term in op.terms:
        matrix += term_to_dense(term, op.num_qubits)
    return matrix


# Each extended symbol as a sum of (Pauli code or identity, weight)
_PAULI_EXPANSION: Dict[OpCode, Tuple[Tuple[Optional[OpCode], complex], ...]] = {
    OpCode.Z: ((OpCode.Z, 1.0),),
    OpCode.X: ((OpCode.X, 1.0),),
    OpCode.Y: ((OpCode.Y, 1.0),),
    OpCode.P0: ((None, 0.5), (OpCode.Z, 0.5)),
    OpCode.P1: ((None, 0.5), (OpCode.Z, -0.5)),
    OpCode.LOWER: ((OpCode.X, 0.5), (OpCode.Y, 0.5j)),
    OpCode.RAISE: ((OpCode.X, 0.5), (OpCode.Y, -0.5j)),
}


def to_pauli(op: QubitOperator) -> QubitOperator:
    """Rewrite an extended-alphabet operator as a combined sum of Pauli words"""
    terms = []
    for term in op.terms:
        choices = [_PAULI_EXPANSION[c] for c in term.codes]
        for picks in itertools.product(*choices):
            coefficient = term.coefficient
            pairs = []
            for index, (code, factor) in zip(term.indices, picks):
                coefficient *= factor
                if code is not None:
                    pairs.append((index, code))
            terms.append(QubitTerm.from_pairs(coefficient, pairs))
    pauli = QubitOperator(tuple(terms), op.num_qubits, fermionic=False)
    return combine_like_terms(pauli)
