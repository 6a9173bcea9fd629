"""
Bit-string list files: one binary string per line, most significant bit
leftmost, optionally followed by a count column. Counts are kept for
reference but do not affect membership. '#' starts a comment.
"""

import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Optional

from ..subspace.bitstring import BitString, format_bitstring
from ..subspace.subspace import Subspace
from ..utils.errors import ParseError, ValidationError

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


@dataclass
class BitStringList:
    bitstrings: List[BitString]
    num_qubits: int
    counts: List[Optional[int]] = field(default_factory=list)

    def to_subspace(self) -> Subspace:
        return Subspace(self.bitstrings, self.num_qubits)


def read_bitstrings(text: str, num_qubits: Optional[int] = None) -> BitStringList:
    """
    Width is taken from the first string unless given. A string that
    disagrees with a given width is a dimension error, not a parse error.
    """
    values: List[BitString] = []
    counts: List[Optional[int]] = []
    width_given = num_qubits is not None
    for line_number, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.partition("#")[0].split()
        if not tokens:
            continue
        if len(tokens) > 2:
            raise ParseError(f"expected 'bits [count]', got {len(tokens)} fields", line_number)
        bits = tokens[0]
        if bits.strip("01"):
            raise ParseError(f"bit-string {bits!r} must contain only 0 and 1", line_number)
        if num_qubits is None:
            num_qubits = len(bits)
        elif len(bits) != num_qubits:
            message = f"bit-string has width {len(bits)}, expected {num_qubits}"
            if width_given:
                raise ValidationError(f"line {line_number}: {message}")
            raise ParseError(message, line_number)
        count = None
        if len(tokens) == 2:
            try:
                count = int(tokens[1])
            except ValueError:
                raise ParseError(f"count {tokens[1]!r} is not an integer", line_number)
        values.append(int(bits, 2))
        counts.append(count)

    if num_qubits is None:
        raise ValidationError("bit-string file is empty and no width was given")
    logger.debug("read %d bit-strings of width %d", len(values), num_qubits)
    return BitStringList(values, num_qubits, counts)


def parse_bitstrings(text: str, num_qubits: Optional[int] = None) -> Subspace:
    return read_bitstrings(text, num_qubits).to_subspace()


def emit_bitstrings(bitstrings: Iterable[BitString], num_qubits: int) -> str:
    lines = [f"# format={FORMAT_VERSION}"]
    lines.extend(format_bitstring(b, num_qubits) for b in bitstrings)
    return "\n".join(lines) + "\n"
