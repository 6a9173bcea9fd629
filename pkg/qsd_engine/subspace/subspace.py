"""
Subspace of computational-basis bit-strings.

Entries live in an open-addressing hash table whose bucket count is fixed
at construction (load factor <= 0.5). Each bucket stores the ordinal index
of its entry, so the table offers insertion-order indexed access and
membership lookup from a single structure. A separate occupancy bit-set,
one bit per bucket, lets a lookup reject an empty home bucket before the
bucket array is touched.
"""

import logging
from typing import Iterable, Iterator, List, Optional, Sequence, Union

from ..utils.errors import ValidationError
from .bitstring import BitString, format_bitstring, parse_bitstring

logger = logging.getLogger(__name__)

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_EMPTY = -1


class Subspace:
    """Build-once, read-many set of bit-strings with ordinal indices"""

    def __init__(self, bitstrings: Iterable[BitString], num_qubits: int, max_load: float = 0.5):
        if num_qubits < 1:
            raise ValidationError(f"num_qubits must be >= 1, got {num_qubits}")
        if not 0.0 < max_load <= 0.5:
            raise ValidationError(f"max_load must be in (0, 0.5], got {max_load}")
        self.num_qubits = num_qubits

        candidates = list(bitstrings)
        capacity = 8
        while capacity * max_load < len(candidates):
            capacity *= 2
        self._shift = 64 - (capacity.bit_length() - 1)
        self._mask = capacity - 1
        self._slots: List[int] = [_EMPTY] * capacity
        self._occupancy = bytearray((capacity + 7) // 8)
        self._keys: List[BitString] = []

        limit = 1 << num_qubits
        for position, bits in enumerate(candidates):
            if not 0 <= bits < limit:
                raise ValidationError(
                    f"entry {position} ({bits}) does not fit in {num_qubits} qubits"
                )
            self._insert(bits)

        self.is_sorted = all(a < b for a, b in zip(self._keys, self._keys[1:]))
        logger.debug(
            "subspace: %d entries (%d given), %d buckets", len(self._keys), len(candidates), capacity
        )

    @classmethod
    def from_bitstrings(cls, strings: Sequence[Union[str, BitString]], num_qubits: int) -> "Subspace":
        """Ingest text or integer bit-strings, dropping duplicates (first occurrence wins)"""
        values = []
        for position, item in enumerate(strings):
            if isinstance(item, str):
                try:
                    values.append(parse_bitstring(item, num_qubits))
                except ValidationError as e:
                    raise ValidationError(f"entry {position}: {e}")
            else:
                values.append(int(item))
        return cls(values, num_qubits)

    # hashing

    def bucket_of(self, bits: BitString) -> int:
        """Home bucket: Fibonacci mixing of the integer hash, top bits kept"""
        return ((hash(bits) * _GOLDEN) & _MASK64) >> self._shift

    def occupancy_bit(self, bucket: int) -> bool:
        return bool((self._occupancy[bucket >> 3] >> (bucket & 7)) & 1)

    @property
    def num_buckets(self) -> int:
        return len(self._slots)

    @property
    def load_factor(self) -> float:
        return len(self._keys) / len(self._slots)

    def _insert(self, bits: BitString) -> int:
        bucket = self.bucket_of(bits)
        while True:
            slot = self._slots[bucket]
            if slot == _EMPTY:
                index = len(self._keys)
                self._keys.append(bits)
                self._slots[bucket] = index
                self._occupancy[bucket >> 3] |= 1 << (bucket & 7)
                return index
            if self._keys[slot] == bits:
                return slot
            bucket = (bucket + 1) & self._mask

    # lookup

    def contains(self, bits: BitString, use_occupancy: bool = True) -> Optional[int]:
        """Ordinal index of bits, or None when absent"""
        bucket = self.bucket_of(bits)
        if use_occupancy and not (self._occupancy[bucket >> 3] >> (bucket & 7)) & 1:
            return None
        slots, keys, mask = self._slots, self._keys, self._mask
        while True:
            slot = slots[bucket]
            if slot == _EMPTY:
                return None
            if keys[slot] == bits:
                return slot
            bucket = (bucket + 1) & mask

    def index_of(self, bits: BitString) -> int:
        index = self.contains(bits)
        if index is None:
            raise KeyError(format_bitstring(bits, self.num_qubits))
        return index

    def __contains__(self, bits: BitString) -> bool:
        return self.contains(bits) is not None

    # indexed access

    def get(self, index: int) -> BitString:
        return self._keys[index]

    __getitem__ = get

    def __len__(self) -> int:
        return len(self._keys)

    @property
    def dim(self) -> int:
        return len(self._keys)

    def __iter__(self) -> Iterator[BitString]:
        return iter(self._keys)

    @property
    def bitstrings(self) -> List[BitString]:
        return list(self._keys)

    def to_strings(self) -> List[str]:
        return [format_bitstring(bits, self.num_qubits) for bits in self._keys]

    # derived subspaces

    def sort_by_integer_value(self) -> "Subspace":
        """New subspace with entries re-indexed in ascending integer order"""
        if self.is_sorted:
            return self
        return Subspace(sorted(self._keys), self.num_qubits)

    def union(self, extra: Iterable[BitString]) -> "Subspace":
        """Existing entries keep their indices; new ones are appended in the given order"""
        return Subspace(self._keys + list(extra), self.num_qubits)

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, num_qubits={self.num_qubits}, sorted={self.is_sorted})"
