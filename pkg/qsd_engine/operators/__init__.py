"""Qubit and fermionic operator representations over the extended alphabet"""

from .alphabet import OpCode, merge_pair
from .qubit import QubitOperator, QubitTerm, combine_like_terms, off_diagonal_structure
from .fermion import FermionOperator, FermionTerm, normalize
from .jordan_wigner import jordan_wigner

__all__ = [
    "OpCode",
    "merge_pair",
    "QubitTerm",
    "QubitOperator",
    "combine_like_terms",
    "off_diagonal_structure",
    "FermionTerm",
    "FermionOperator",
    "normalize",
    "jordan_wigner",
]
