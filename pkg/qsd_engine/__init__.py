"""
QSD Engine - subspace Hamiltonian construction and solution
Builds sparse-matrix and matrix-free representations of qubit and fermionic
Hamiltonians projected into a subspace of sampled bit-strings.
"""

__version__ = "1.0.0"
