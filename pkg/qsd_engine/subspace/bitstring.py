"""
Bit-strings are plain Python integers: arbitrary width, qubit 0 is the least
significant bit. Text form puts the most significant bit leftmost.
"""

from typing import Iterable

from ..utils.errors import ValidationError

BitString = int


def parse_bitstring(text: str, num_qubits: int) -> BitString:
    text = text.strip()
    if len(text) != num_qubits:
        raise ValidationError(f"bit-string {text!r} has width {len(text)}, expected {num_qubits}")
    if not text or text.strip("01"):
        raise ValidationError(f"bit-string {text!r} must contain only 0 and 1")
    return int(text, 2)


def format_bitstring(bits: BitString, num_qubits: int) -> str:
    return format(bits, f"0{num_qubits}b")


def structure_mask(structure: Iterable[int]) -> int:
    mask = 0
    for index in structure:
        mask |= 1 << index
    return mask


def column_bitstring(row: BitString, structure: Iterable[int]) -> BitString:
    """Flip the row bits at the off-diagonal structure indices"""
    return row ^ structure_mask(structure)


def get_bit(bits: BitString, index: int) -> int:
    return (bits >> index) & 1
