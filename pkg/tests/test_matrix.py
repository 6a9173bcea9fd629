import numpy as np
import pytest

from qsd_engine.hamiltonian import (
    CSRMatrix,
    MatrixFreeOperator,
    SubspaceHamiltonian,
    build_csr,
    compute_diagonal,
    group_terms,
    matvec,
    msob_is_lower,
    spmv,
)
from qsd_engine.hamiltonian.csr import index_dtypes
from qsd_engine.models import heisenberg_xxz
from qsd_engine.operators import OpCode, QubitOperator, QubitTerm, jordan_wigner
from qsd_engine.subspace import Subspace
from qsd_engine.utils.errors import IndexWidthError, ValidationError

from conftest import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    full_subspace,
    heisenberg_dense,
    kron_sites,
    random_fermion_operator,
    random_subspace,
    restrict,
)

HEISENBERG_PAIR = np.array(
    [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, -1.0, 0.6, 0.0],
        [0.0, 0.6, -1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]
)


def test_heisenberg_pair_full_space():
    gh = group_terms(heisenberg_xxz(2))
    matrix = build_csr(gh, full_subspace(2))
    np.testing.assert_allclose(matrix.to_dense(), HEISENBERG_PAIR, atol=1e-15)
    assert matrix.dtype == np.float64


def test_heisenberg_pair_sector():
    gh = group_terms(heisenberg_xxz(2))
    matrix = build_csr(gh, Subspace.from_bitstrings(["01", "10"], 2))
    np.testing.assert_allclose(matrix.to_dense(), [[-1.0, 0.6], [0.6, -1.0]], atol=1e-15)
    assert matrix.nnz == 4


def test_every_row_stores_its_diagonal():
    op = QubitOperator((QubitTerm.from_pairs(1.0, [(0, OpCode.X)]),), 1)
    matrix = build_csr(group_terms(op), full_subspace(1))
    assert matrix.nnz == 4
    np.testing.assert_array_equal(matrix.diagonal(), [0.0, 0.0])


@pytest.mark.parametrize("L", range(2, 11))
def test_random_subspaces_match_dense_slice(rng, L):
    gh = group_terms(heisenberg_xxz(L))
    dense = heisenberg_dense(L).real
    for k in range(100):
        subspace = random_subspace(rng, L, int(rng.integers(1, 2 ** L + 1)))
        if k % 2:
            # sorted subspaces take the mirrored lower-triangle build
            subspace = subspace.sort_by_integer_value()
        matrix = build_csr(gh, subspace)
        np.testing.assert_allclose(matrix.to_dense(), restrict(dense, subspace), rtol=0, atol=1e-13)


@pytest.mark.parametrize("L", [3, 4, 5])
def test_periodic_heisenberg_matches_dense(rng, L):
    gh = group_terms(heisenberg_xxz(L, periodic=True))
    dense = heisenberg_dense(L) + _periodic_bond(L)
    for size in (1, 3, 2 ** L // 2, 2 ** L):
        subspace = random_subspace(rng, L, size)
        matrix = build_csr(gh, subspace, lower_only=False)
        np.testing.assert_allclose(matrix.to_dense(), restrict(dense, subspace).real, atol=1e-12)


def _periodic_bond(L, J=0.3):
    return (
        J * kron_sites({L - 1: PAULI_X, 0: PAULI_X}, L)
        + J * kron_sites({L - 1: PAULI_Y, 0: PAULI_Y}, L)
        + kron_sites({L - 1: PAULI_Z, 0: PAULI_Z}, L)
    )


def test_fermionic_restriction_matches_dense(rng):
    for _ in range(10):
        op = jordan_wigner(random_fermion_operator(rng, 5, 6))
        gh = group_terms(op)
        dense = op.to_dense()
        subspace = random_subspace(rng, 5, 12)
        matrix = build_csr(gh, subspace, lower_only=False)
        np.testing.assert_allclose(matrix.to_dense(), restrict(dense, subspace), atol=1e-12)


def test_build_variants_are_equivalent(rng):
    op = jordan_wigner(random_fermion_operator(rng, 6, 8))
    gh = group_terms(op)
    subspace = random_subspace(rng, 6, 30).sort_by_integer_value()
    reference = build_csr(gh, subspace, mode="two-pass", lower_only=False)
    for mode in ("two-pass", "fast"):
        for lower_only in (False, True):
            for buckets in (True, False):
                matrix = build_csr(gh, subspace, mode=mode, lower_only=lower_only, use_ladder_buckets=buckets)
                assert np.array_equal(matrix.indptr, reference.indptr)
                assert np.array_equal(matrix.indices, reference.indices)
                np.testing.assert_allclose(matrix.data, reference.data, atol=1e-12)


def test_two_pass_and_fast_are_bit_identical(rng):
    gh = group_terms(heisenberg_xxz(8))
    subspace = random_subspace(rng, 8, 100).sort_by_integer_value()
    for lower_only in (False, True):
        two_pass = build_csr(gh, subspace, mode="two-pass", lower_only=lower_only)
        fast = build_csr(gh, subspace, mode="fast", lower_only=lower_only)
        assert two_pass.equals(fast)


def test_threads_do_not_change_the_matrix(rng):
    gh = group_terms(heisenberg_xxz(7))
    subspace = random_subspace(rng, 7, 64).sort_by_integer_value()
    serial = build_csr(gh, subspace, mode="fast")
    for threads in (2, 5):
        assert build_csr(gh, subspace, mode="fast", threads=threads).equals(serial)
        assert build_csr(gh, subspace, mode="two-pass", threads=threads).equals(serial)


def test_lower_only_needs_sorted_subspace():
    gh = group_terms(heisenberg_xxz(2))
    unsorted = Subspace.from_bitstrings(["10", "01"], 2)
    with pytest.raises(ValidationError):
        build_csr(gh, unsorted, lower_only=True)
    np.testing.assert_allclose(build_csr(gh, unsorted).to_dense(), [[-1.0, 0.6], [0.6, -1.0]])


def test_unknown_build_mode():
    with pytest.raises(ValidationError):
        build_csr(group_terms(heisenberg_xxz(2)), full_subspace(2), mode="dense")


def _matrix_free_instances():
    rng = np.random.default_rng(7)
    instances = []
    for L, size in ((2, 4), (4, 16), (7, 60), (10, 300), (12, 400)):
        instances.append((heisenberg_xxz(L), random_subspace(rng, L, size)))
    for modes, terms in ((4, 5), (6, 8), (8, 10)):
        op = jordan_wigner(random_fermion_operator(rng, modes, terms))
        instances.append((op, random_subspace(rng, modes, 2 ** modes // 2)))
    return instances


@pytest.mark.parametrize("op,subspace", _matrix_free_instances())
def test_matrix_free_matches_csr(rng, op, subspace):
    gh = group_terms(op)
    matrix = build_csr(gh, subspace, lower_only=False)
    operator = MatrixFreeOperator(gh, subspace, threads=2)
    for _ in range(20):
        x = rng.normal(size=subspace.dim) + 1j * rng.normal(size=subspace.dim)
        np.testing.assert_allclose(matvec(operator, x), spmv(matrix, x), rtol=0, atol=1e-12)
    assert operator.num_calls == 20
    np.testing.assert_allclose(operator.matvec(x), matrix.to_scipy() @ x, rtol=0, atol=1e-12)


def test_spmv_examples():
    gh = group_terms(heisenberg_xxz(2))
    matrix = build_csr(gh, Subspace.from_bitstrings(["01", "10"], 2))
    np.testing.assert_allclose(spmv(matrix, np.array([1.0, 1.0])), [-0.4, -0.4])
    np.testing.assert_allclose(matrix.spmv(np.array([1.0, -1.0]), threads=2), [-1.6, 1.6])
    with pytest.raises(ValidationError):
        spmv(matrix, np.ones(3))


def test_spmv_matches_scipy(rng):
    gh = group_terms(heisenberg_xxz(6))
    matrix = build_csr(gh, random_subspace(rng, 6, 40))
    x = rng.normal(size=matrix.dim)
    for threads in (1, 3, 8):
        np.testing.assert_allclose(spmv(matrix, x, threads), matrix.to_scipy() @ x, atol=1e-12)


def test_msob_examples():
    row = int("110110", 2)
    # structure [1, 3]: qubit 3 of the row is 0, the column lies above the diagonal
    assert not msob_is_lower(row, 3)
    # structure [1, 2]: qubit 2 is 1, below the diagonal
    assert msob_is_lower(row, 2)
    assert msob_is_lower(0b100, 2)
    assert not msob_is_lower(0b011, 2)
    assert msob_is_lower(0b1010, 1)


def test_wide_bitstrings():
    width = 200
    terms = tuple(QubitTerm.from_pairs(1.0, [(i, OpCode.Z)]) for i in range(width))
    gh = group_terms(QubitOperator(terms, width))
    rows = [0, (1 << width) - 1, 1 << 150, (1 << 199) | 1]
    matrix = build_csr(gh, Subspace(rows, width))
    np.testing.assert_allclose(matrix.diagonal(), [200.0, -200.0, 198.0, 196.0])
    assert matrix.nnz == 4


def test_index_width():
    assert index_dtypes(10, 10, "64") == (np.int64, np.int64)
    assert index_dtypes(10, 10, "32") == (np.int32, np.int32)
    assert index_dtypes(10, 2 ** 31, "auto") == (np.int32, np.int64)
    with pytest.raises(IndexWidthError):
        index_dtypes(2 ** 31, 2 ** 31, "32")

    gh = group_terms(heisenberg_xxz(2))
    matrix = build_csr(gh, full_subspace(2), index_width="64")
    assert matrix.indices.dtype == np.int64
    assert matrix.indptr.dtype == np.int64


def test_empty_subspace_matrix():
    gh = group_terms(heisenberg_xxz(2))
    matrix = build_csr(gh, Subspace([], 2))
    assert matrix.dim == 0
    assert matrix.nnz == 0
    assert spmv(matrix, np.zeros(0)).shape == (0,)


def test_subspace_hamiltonian_binds_operator_and_subspace(rng):
    gh = group_terms(heisenberg_xxz(4))
    subspace = full_subspace(4)
    bound = SubspaceHamiltonian(gh, subspace)
    np.testing.assert_array_equal(bound.diagonal.values, compute_diagonal(gh, subspace).values)
    assert bound.to_csr().equals(build_csr(gh, subspace, diagonal=bound.diagonal))
    x = rng.normal(size=subspace.dim)
    np.testing.assert_allclose(bound.linear_operator().matvec(x), bound.to_scipy() @ x, atol=1e-12)
    assert bound.trim(1e3).num_groups < gh.num_groups
    with pytest.raises(ValidationError):
        SubspaceHamiltonian(gh, Subspace([0], 2))


def test_csr_from_scipy_roundtrip(rng):
    gh = group_terms(heisenberg_xxz(4))
    matrix = build_csr(gh, full_subspace(4))
    again = CSRMatrix.from_scipy(matrix.to_scipy())
    assert again.dim == matrix.dim
    np.testing.assert_array_equal(again.to_dense(), matrix.to_dense())
    assert matrix.hermiticity_error() == 0.0
