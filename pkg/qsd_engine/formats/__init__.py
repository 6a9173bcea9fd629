"""Readers and writers for operator, integral, bit-string, matrix and report files"""

from .bitstrings import BitStringList, emit_bitstrings, parse_bitstrings, read_bitstrings
from .fcidump import FcidumpIntegrals, fermion_operator_from_integrals, parse_fcidump, read_fcidump
from .matrix_market import matrix_market_text, read_matrix_market, write_matrix_market
from .report import RunReport, emit_report
from .term_list import emit_term_list, parse_term_list

__all__ = [
    "BitStringList",
    "emit_bitstrings",
    "parse_bitstrings",
    "read_bitstrings",
    "FcidumpIntegrals",
    "fermion_operator_from_integrals",
    "parse_fcidump",
    "read_fcidump",
    "matrix_market_text",
    "read_matrix_market",
    "write_matrix_market",
    "RunReport",
    "emit_report",
    "emit_term_list",
    "parse_term_list",
]
