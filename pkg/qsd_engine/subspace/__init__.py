"""Bit-string subspaces with indexed access and fast membership lookup"""

from .bitstring import BitString, column_bitstring, format_bitstring, parse_bitstring, structure_mask
from .subspace import Subspace

__all__ = [
    "BitString",
    "Subspace",
    "column_bitstring",
    "format_bitstring",
    "parse_bitstring",
    "structure_mask",
]
