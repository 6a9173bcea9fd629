import json

import numpy as np
import pytest

from qsd_engine.formats import (
    RunReport,
    emit_bitstrings,
    emit_report,
    emit_term_list,
    matrix_market_text,
    parse_bitstrings,
    parse_fcidump,
    parse_term_list,
    read_bitstrings,
    read_fcidump,
    read_matrix_market,
    write_matrix_market,
)
from qsd_engine.hamiltonian import build_csr, group_terms
from qsd_engine.models import heisenberg_xxz
from qsd_engine.operators import OpCode, jordan_wigner
from qsd_engine.subspace import Subspace
from qsd_engine.utils.errors import ParseError, ValidationError

from conftest import H2, H2_FCIDUMP, annihilation, full_subspace, random_fermion_operator

TERM_LIST = """\
# format=1
qubits 4
fermionic
0.3 X0 X1
-0.5 0.25 +0 -1
1.5
2.0 P0_2 P1_3 Z1
"""


def test_parse_term_list():
    op = parse_term_list(TERM_LIST)
    assert op.num_qubits == 4
    assert op.fermionic
    assert len(op) == 4
    xx, hop, constant, projectors = op.terms
    assert xx.codes == (OpCode.X, OpCode.X)
    assert hop.coefficient == complex(-0.5, 0.25)
    assert hop.codes == (OpCode.RAISE, OpCode.LOWER)
    assert constant.indices == () and constant.coefficient == 1.5
    assert projectors.indices == (1, 2, 3)
    assert projectors.codes == (OpCode.Z, OpCode.P0, OpCode.P1)


def test_minus_token_is_always_an_operator():
    op = parse_term_list("qubits 2\n1.5 -1\n")
    (term,) = op.terms
    assert term.coefficient == 1.5
    assert term.codes == (OpCode.LOWER,)
    assert term.indices == (1,)


def test_emitted_term_list_parses_back(rng):
    op = jordan_wigner(random_fermion_operator(rng, 4, 5))
    text = emit_term_list(op)
    assert text.startswith("# format=1\nqubits 4\nfermionic\n")
    again = parse_term_list(text)
    assert again == op
    assert again.fermionic


@pytest.mark.parametrize(
    "text,line",
    [
        ("0.5 X0\n", 1),
        ("qubits 2\nqubits 3\n", 2),
        ("qubits 2\n0.5 Q0\n", 2),
        ("qubits 2\n\n1.0 X0 Z0\n", 3),
        ("qubits 2\n1.0 X2\n", 2),
        ("# format=2\nqubits 2\n", 1),
        ("qubits two\n", 1),
        ("qubits 2\nabc X0\n", 2),
    ],
)
def test_term_list_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as excinfo:
        parse_term_list(text)
    assert excinfo.value.line_number == line
    assert f"line {line}" in str(excinfo.value)


def test_term_list_without_header():
    with pytest.raises(ParseError, match="missing 'qubits N' header"):
        parse_term_list("# nothing here\n")


def test_bitstring_files():
    listing = read_bitstrings("# samples\n0101 12\n0011\n\n1111 3  # heavy\n")
    assert listing.num_qubits == 4
    assert listing.bitstrings == [0b0101, 0b0011, 0b1111]
    assert listing.counts == [12, None, 3]
    assert parse_bitstrings("01\n01\n10\n").to_strings() == ["01", "10"]
    assert emit_bitstrings([0b01, 0b10], 2) == "# format=1\n01\n10\n"
    assert read_bitstrings("", 3).bitstrings == []


@pytest.mark.parametrize(
    "text,line",
    [
        ("0101\n011\n", 2),
        ("0101\n01a1\n", 2),
        ("0101 1 2\n", 1),
        ("0101 many\n", 1),
    ],
)
def test_bitstring_errors(text, line):
    with pytest.raises(ParseError) as excinfo:
        read_bitstrings(text)
    assert excinfo.value.line_number == line


def test_bitstring_width_must_match_operator():
    with pytest.raises(ValidationError, match="line 1"):
        read_bitstrings("011\n", 4)
    with pytest.raises(ValidationError):
        read_bitstrings("\n# only comments\n")


def integrals_dense(h1, eri, core):
    """Second-quantized Hamiltonian assembled directly from ladder matrices"""
    norb = h1.shape[0]
    modes = 2 * norb
    a = [annihilation(m, modes) for m in range(modes)]
    ad = [m.conj().T for m in a]
    dense = core * np.eye(2 ** modes, dtype=complex)
    for p in range(norb):
        for q in range(norb):
            for s in (0, 1):
                dense += h1[p, q] * ad[2 * p + s] @ a[2 * q + s]
    for p, q, r, t in np.ndindex(eri.shape):
        for s in (0, 1):
            for u in (0, 1):
                dense += 0.5 * eri[p, q, r, t] * ad[2 * p + s] @ ad[2 * r + u] @ a[2 * t + u] @ a[2 * q + s]
    return dense


def test_fcidump_namelist_header_and_symmetry():
    integrals = read_fcidump(H2_FCIDUMP)
    assert (integrals.norb, integrals.nelec, integrals.ms2) == (2, 2, 0)
    assert integrals.num_modes == 4
    assert integrals.core_energy == H2["core"]
    eri = integrals.two_body
    for index in [(0, 1, 0, 1), (1, 0, 0, 1), (0, 1, 1, 0), (1, 0, 1, 0)]:
        assert eri[index] == H2["g1212"]
    assert eri[1, 1, 0, 0] == eri[0, 0, 1, 1] == H2["g1122"]
    assert integrals.one_body[0, 1] == 0.0


def test_fcidump_matches_second_quantized_oracle():
    integrals = read_fcidump(H2_FCIDUMP)
    op = jordan_wigner(parse_fcidump(H2_FCIDUMP))
    expected = integrals_dense(integrals.one_body, integrals.two_body, integrals.core_energy)
    np.testing.assert_allclose(op.to_dense(), expected, atol=1e-12)

    two_electron = np.array(
        [
            [2 * H2["h11"] + H2["g1111"], H2["g1212"]],
            [H2["g1212"], 2 * H2["h22"] + H2["g2222"]],
        ]
    )
    ground = np.linalg.eigvalsh(two_electron)[0] + H2["core"]
    assert np.linalg.eigvalsh(op.to_dense())[0] == pytest.approx(ground, abs=1e-10)
    assert ground == pytest.approx(-1.137, abs=1e-3)


def test_fcidump_whitespace_header_single_orbital():
    text = "NORB 1\nNELEC 2\nMS2 0\n0.5 1 1 1 1\n-1.0 1 1 0 0\n0.25 0 0 0 0\n"
    integrals = read_fcidump(text)
    assert integrals.norb == 1
    op = jordan_wigner(integrals.to_fermion_operator())
    dense = op.to_dense()
    # empty, one electron of either spin, doubly occupied
    np.testing.assert_allclose(np.diag(dense).real, [0.25, -0.75, -0.75, -1.25])
    np.testing.assert_allclose(dense - np.diag(np.diag(dense)), 0.0)


def test_fcidump_core_energy_only():
    op = parse_fcidump("&FCI NORB=1, NELEC=0, MS2=0 /\n 1.5 0 0 0 0\n")
    assert op.constant == 1.5
    assert len(op) == 0
    (term,) = jordan_wigner(op).terms
    assert term.indices == () and term.coefficient == 1.5


def test_fcidump_fortran_exponents():
    integrals = read_fcidump("&FCI NORB=1 &END\n-1.5D+00 1 1 0 0\n")
    assert integrals.one_body[0, 0] == -1.5


@pytest.mark.parametrize(
    "text,line",
    [
        ("&FCI NORB=2 &END\n1.0 1 0 1 0\n", 2),
        ("&FCI NORB=2 &END\n1.0 3 1 0 0\n", 2),
        ("&FCI NORB=2 &END\n1.0 1 1\n", 2),
        ("&FCI NORB=2 &END\n1.0 0 1 0 0\n", 2),
    ],
)
def test_fcidump_errors(text, line):
    with pytest.raises(ParseError) as excinfo:
        read_fcidump(text)
    assert excinfo.value.line_number == line


def test_fcidump_header_errors():
    with pytest.raises(ParseError):
        read_fcidump("&FCI NORB=2\n1.0 1 1 0 0\n")
    with pytest.raises(ParseError):
        read_fcidump("&FCI NELEC=2 &END\n")


def test_matrix_market_roundtrip(tmp_path):
    matrix = build_csr(group_terms(heisenberg_xxz(3)), full_subspace(3))
    path = tmp_path / "h.mtx"
    write_matrix_market(matrix, path)
    text = path.read_text()
    assert text.startswith("%%MatrixMarket matrix coordinate real general")
    assert "format=1" in text
    again = read_matrix_market(path)
    np.testing.assert_array_equal(again.to_dense(), matrix.to_dense())
    assert matrix_market_text(matrix) == text


def test_matrix_market_complex(rng):
    op = jordan_wigner(random_fermion_operator(rng, 3, 3))
    matrix = build_csr(group_terms(op), full_subspace(3))
    if matrix.dtype.kind == "c":
        assert "complex" in matrix_market_text(matrix).splitlines()[0]


def test_report_fields_and_order():
    report = RunReport(
        eigenvalue=-1.6,
        residual=1e-14,
        iterations=2,
        converged=True,
        dim=2,
        nnz=4,
        num_groups=1,
        num_groups_after_trim=1,
        timings_ms={"build": 0.5},
        mode="two-pass",
    )
    payload = json.loads(emit_report(report))
    assert list(payload) == [
        "eigenvalue",
        "residual",
        "iterations",
        "converged",
        "dim",
        "nnz",
        "num_groups",
        "num_groups_after_trim",
        "timings_ms",
        "mode",
    ]
    assert payload["eigenvalue"] == -1.6


def test_wide_subspace_bitstrings_roundtrip():
    width = 130
    values = [0, 1 << 129, (1 << 130) - 1]
    text = emit_bitstrings(values, width)
    assert list(parse_bitstrings(text)) == values
    assert isinstance(parse_bitstrings(text), Subspace)
