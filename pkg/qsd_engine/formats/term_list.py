"""
Plain-text qubit operator files.

    # format=1
    qubits 4
    fermionic            (optional: operator came from a fermionic transform)
    0.3 X0 X1
    -0.5 0.25 +0 -1      (real part, imaginary part, operators)
    1.5                  (constant)

Operators are written SymbolIndex with symbols X, Y, Z, P0_, P1_, + and -.
A second numeric token is read as the imaginary part only when it is not an
operator token, so "-1" is always Lower on qubit 1; imaginary parts are
written with a decimal point.
"""

import logging
import re
from typing import List, Optional, Tuple

from ..operators.alphabet import OpCode
from ..operators.qubit import QubitOperator, QubitTerm
from ..utils.errors import ParseError, ValidationError

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1

OP_PATTERN = re.compile(r"^(X|Y|Z|P0_|P1_|\+|-)(\d+)$")
FORMAT_PATTERN = re.compile(r"format\s*=\s*(\d+)")

TOKEN_CODES = {
    "X": OpCode.X,
    "Y": OpCode.Y,
    "Z": OpCode.Z,
    "P0_": OpCode.P0,
    "P1_": OpCode.P1,
    "-": OpCode.LOWER,
    "+": OpCode.RAISE,
}
CODE_TOKENS = {code: token for token, code in TOKEN_CODES.items()}


def _parse_float(token: str, line_number: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise ParseError(f"expected a number, got {token!r}", line_number)


def _parse_term(tokens: List[str], num_qubits: int, line_number: int) -> QubitTerm:
    real = _parse_float(tokens[0], line_number)
    position = 1
    imag = 0.0
    if len(tokens) > 1 and not OP_PATTERN.match(tokens[1]):
        try:
            imag = float(tokens[1])
            position = 2
        except ValueError:
            raise ParseError(f"unknown operator symbol {tokens[1]!r}", line_number)

    pairs: List[Tuple[int, OpCode]] = []
    seen = set()
    for token in tokens[position:]:
        match = OP_PATTERN.match(token)
        if match is None:
            raise ParseError(f"unknown operator symbol {token!r}", line_number)
        index = int(match.group(2))
        if index in seen:
            raise ParseError(f"qubit {index} appears twice in one term", line_number)
        if index >= num_qubits:
            raise ParseError(f"qubit {index} out of range for {num_qubits} qubits", line_number)
        seen.add(index)
        pairs.append((index, TOKEN_CODES[match.group(1)]))
    return QubitTerm.from_pairs(complex(real, imag), pairs)


def parse_term_list(text: str) -> QubitOperator:
    num_qubits: Optional[int] = None
    fermionic = False
    terms: List[QubitTerm] = []

    for line_number, raw in enumerate(text.splitlines(), start=1):
        line, _, comment = raw.partition("#")
        version = FORMAT_PATTERN.search(comment)
        if version and int(version.group(1)) != FORMAT_VERSION:
            raise ParseError(f"unsupported term-list format {version.group(1)}", line_number)
        tokens = line.split()
        if not tokens:
            continue

        keyword = tokens[0].lower()
        if keyword == "qubits":
            if num_qubits is not None:
                raise ParseError("duplicate 'qubits' header", line_number)
            if len(tokens) != 2 or not tokens[1].isdigit():
                raise ParseError("header must read 'qubits N'", line_number)
            num_qubits = int(tokens[1])
            continue
        if keyword == "fermionic":
            fermionic = True
            continue
        if num_qubits is None:
            raise ParseError("missing 'qubits N' header before the first term", line_number)
        terms.append(_parse_term(tokens, num_qubits, line_number))

    if num_qubits is None:
        raise ParseError("missing 'qubits N' header")
    try:
        operator = QubitOperator(tuple(terms), num_qubits, fermionic)
    except ValidationError as e:
        raise ParseError(str(e))
    logger.debug("parsed %d terms on %d qubits", len(terms), num_qubits)
    return operator


def format_coefficient(coefficient: complex) -> str:
    text = repr(float(coefficient.real))
    if coefficient.imag != 0.0:
        text += " " + repr(float(coefficient.imag))
    return text


def emit_term_list(op: QubitOperator) -> str:
    lines = [f"# format={FORMAT_VERSION}", f"qubits {op.num_qubits}"]
    if op.fermionic:
        lines.append("fermionic")
    for term in op.terms:
        ops = [f"{CODE_TOKENS[c]}{i}" for i, c in zip(term.indices, term.codes)]
        lines.append(" ".join([format_coefficient(term.coefficient)] + ops))
    return "\n".join(lines) + "\n"
