"""
Shared fixtures and brute-force oracles.

Dense matrices here are built from explicit Pauli matrices, independently of
the library's own extended-alphabet tables. Qubit 0 is the least significant
bit of the row index.
"""

import numpy as np
import pytest

from qsd_engine.operators.fermion import FermionOperator, FermionTerm
from qsd_engine.subspace.subspace import Subspace
from qsd_engine.utils import settings as settings_module

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

# H2 in a minimal basis: two spatial orbitals, chemist-notation integrals
H2 = {
    "core": 0.7137539936876182,
    "h11": -1.2524635735648986,
    "h22": -0.4759487152209648,
    "g1111": 0.6744887663568382,
    "g2222": 0.6973979494693556,
    "g1122": 0.6636340478615040,
    "g1212": 0.1812875327526847,
}

H2_FCIDUMP = """\
 &FCI NORB=  2,NELEC=  2,MS2= 0,
  ORBSYM=1,5,
  ISYM=1,
 &END
  {g1111:.16E}   1   1   1   1
  {g1212:.16E}   1   2   1   2
  {g1122:.16E}   1   1   2   2
  {g2222:.16E}   2   2   2   2
  {h11:.16E}   1   1   0   0
  {h22:.16E}   2   2   0   0
  {core:.16E}   0   0   0   0
""".format(**H2)


def kron_sites(factors: dict, num_qubits: int) -> np.ndarray:
    """Tensor product with factors[q] on qubit q and identity elsewhere"""
    matrix = np.ones((1, 1), dtype=complex)
    for q in reversed(range(num_qubits)):
        matrix = np.kron(matrix, factors.get(q, I2))
    return matrix


def annihilation(mode: int, num_modes: int) -> np.ndarray:
    """Jordan-Wigner a_j = Z_0 ... Z_(j-1) (X_j + i Y_j) / 2"""
    factors = {k: PAULI_Z for k in range(mode)}
    factors[mode] = (PAULI_X + 1j * PAULI_Y) / 2
    return kron_sites(factors, num_modes)


def fermion_dense(op: FermionOperator) -> np.ndarray:
    """Second-quantized matrix of a fermionic operator from explicit ladder matrices"""
    dim = 2 ** op.num_modes
    lowers = [annihilation(m, op.num_modes) for m in range(op.num_modes)]
    matrix = op.constant * np.eye(dim, dtype=complex)
    for term in op.terms:
        product = np.eye(dim, dtype=complex)
        for mode, dagger in zip(term.mode_indices, term.dagger_flags):
            factor = lowers[mode].conj().T if dagger else lowers[mode]
            product = product @ factor
        matrix += term.coefficient * product
    return matrix


def heisenberg_dense(L: int, J: float = 0.3) -> np.ndarray:
    dim = 2 ** L
    matrix = np.zeros((dim, dim), dtype=complex)
    for i in range(L - 1):
        matrix += J * kron_sites({i: PAULI_X, i + 1: PAULI_X}, L)
        matrix += J * kron_sites({i: PAULI_Y, i + 1: PAULI_Y}, L)
        matrix += kron_sites({i: PAULI_Z, i + 1: PAULI_Z}, L)
    return matrix


def restrict(dense: np.ndarray, subspace: Subspace) -> np.ndarray:
    index = np.asarray(list(subspace), dtype=np.int64)
    return dense[np.ix_(index, index)]


def random_fermion_operator(rng: np.random.Generator, num_modes: int, num_terms: int, hermitian: bool = True) -> FermionOperator:
    terms = []
    for _ in range(num_terms):
        length = int(rng.integers(1, 5))
        ops = [(int(rng.integers(num_modes)), bool(rng.integers(2))) for _ in range(length)]
        coefficient = complex(rng.normal(), rng.normal())
        term = FermionTerm.from_ops(coefficient, ops)
        terms.append(term)
        if hermitian:
            terms.append(term.adjoint())
    return FermionOperator.build(terms, num_modes, constant=float(rng.normal()))


def random_subspace(rng: np.random.Generator, num_qubits: int, size: int) -> Subspace:
    size = min(size, 2 ** num_qubits)
    chosen = rng.choice(2 ** num_qubits, size=size, replace=False)
    return Subspace([int(b) for b in chosen], num_qubits)


def full_subspace(num_qubits: int) -> Subspace:
    return Subspace(range(2 ** num_qubits), num_qubits)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch, tmp_path):
    """Every test sees default settings and a private run database"""
    for name in ("QSD_THREADS", "QSD_INDEX_WIDTH", "QSD_SOLVER_TOL", "QSD_SOLVER_MAX_ITER", "QSD_DROP_TOL"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("QSD_RUN_DB", str(tmp_path / "runs.db"))
    settings_module.reset_settings()
    yield
    settings_module.reset_settings()
