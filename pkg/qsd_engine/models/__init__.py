"""Model Hamiltonians and reference subspaces"""

from .spin_chain import heisenberg_xxz, neel_state, neel_subspace

__all__ = ["heisenberg_xxz", "neel_state", "neel_subspace"]
