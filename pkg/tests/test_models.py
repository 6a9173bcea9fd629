import numpy as np
import pytest

from qsd_engine.models import heisenberg_xxz, neel_state, neel_subspace
from qsd_engine.operators import OpCode
from qsd_engine.utils.errors import ValidationError

from conftest import heisenberg_dense

NEEL_4_NEIGHBOURS = ["0101", "0011", "0110", "1001", "1100"]


def test_neel_state():
    assert neel_state(1) == 0b1
    assert neel_state(4) == 0b0101
    assert neel_state(7) == 0b1010101


def test_neel_subspace_expand():
    assert neel_subspace(4).to_strings() == NEEL_4_NEIGHBOURS
    assert neel_subspace(2).to_strings() == ["01", "10"]


def test_neel_subspace_hamming_zero():
    assert neel_subspace(4, hamming=0).to_strings() == ["0101"]


@pytest.mark.parametrize("correction", ["snap", "discard"])
def test_single_flips_change_magnetization(correction):
    assert neel_subspace(4, hamming=1, correction=correction).to_strings() == ["0101"]


@pytest.mark.parametrize("correction", ["expand", "snap", "discard"])
def test_double_flips_keep_magnetization(correction):
    assert neel_subspace(4, hamming=2, correction=correction).to_strings() == NEEL_4_NEIGHBOURS


def test_neel_subspace_keeps_magnetization():
    L = 8
    target = neel_state(L).bit_count()
    subspace = neel_subspace(L, hamming=3)
    assert subspace[0] == neel_state(L)
    assert all(b.bit_count() == target for b in subspace)
    assert list(subspace)[1:] == sorted(list(subspace)[1:])


def test_neel_subspace_validation():
    with pytest.raises(ValidationError):
        neel_subspace(4, correction="round")
    with pytest.raises(ValidationError):
        neel_subspace(4, hamming=-1)
    with pytest.raises(ValidationError):
        neel_state(0)


def test_heisenberg_terms():
    assert len(heisenberg_xxz(4)) == 9
    assert len(heisenberg_xxz(4, periodic=True)) == 12
    assert len(heisenberg_xxz(2, periodic=True)) == 3
    assert heisenberg_xxz(3).codes_used() == {OpCode.X, OpCode.Y, OpCode.Z}
    with pytest.raises(ValidationError):
        heisenberg_xxz(1)


def test_heisenberg_matches_pauli_matrices():
    np.testing.assert_allclose(heisenberg_xxz(4, J=0.7).to_dense(), heisenberg_dense(4, J=0.7), atol=1e-14)
