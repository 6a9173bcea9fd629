"""
FCIDUMP integral files (real, restricted orbitals).

Header: either the namelist form "&FCI NORB=2,NELEC=2,MS2=0, ... &END" (or
"/") or plain "NORB 2" style lines. Data lines read "value i j k l" with
1-based chemist-notation indices:

    i j k l > 0        two-electron integral (ij|kl), 8-fold symmetric
    i j > 0, k = l = 0 one-electron integral h_ij, symmetric
    all zero           core energy
    i > 0, j = k = l = 0   orbital energy, ignored

Spin orbitals are interleaved: spatial orbital p, spin s maps to mode 2p + s.
"""

import logging
import re
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from ..operators.fermion import FermionOperator, FermionTerm
from ..utils.errors import ParseError

logger = logging.getLogger(__name__)

HEADER_FIELDS = {
    "norb": re.compile(r"\bNORB\s*[=\s]\s*(-?\d+)", re.IGNORECASE),
    "nelec": re.compile(r"\bNELEC\s*[=\s]\s*(-?\d+)", re.IGNORECASE),
    "ms2": re.compile(r"\bMS2\s*[=\s]\s*(-?\d+)", re.IGNORECASE),
}
NAMELIST_END = re.compile(r"(&END|\$END|/)\s*$", re.IGNORECASE)


@dataclass
class FcidumpIntegrals:
    norb: int
    nelec: int
    ms2: int
    core_energy: float
    one_body: np.ndarray
    two_body: np.ndarray

    @property
    def num_modes(self) -> int:
        return 2 * self.norb

    def to_fermion_operator(self, tol: float = 0.0) -> FermionOperator:
        return fermion_operator_from_integrals(self.one_body, self.two_body, self.core_energy, tol)


def _is_data_line(tokens: List[str]) -> bool:
    if len(tokens) != 5:
        return False
    try:
        float(tokens[0].replace("D", "E").replace("d", "e"))
        [int(t) for t in tokens[1:]]
    except ValueError:
        return False
    return True


def _split_header(lines: List[str]) -> Tuple[str, int]:
    """Header text and the index of the first data line"""
    first = next((k for k, line in enumerate(lines) if line.strip()), len(lines))
    if first < len(lines) and lines[first].lstrip().upper().startswith("&FCI"):
        for k in range(first, len(lines)):
            if NAMELIST_END.search(lines[k].strip()):
                return "\n".join(lines[first:k + 1]), k + 1
        raise ParseError("namelist header is not terminated by &END or /", first + 1)
    k = first
    while k < len(lines) and not _is_data_line(lines[k].split()):
        k += 1
    return "\n".join(lines[first:k]), k


def _header_value(header: str, name: str, default=None) -> int:
    match = HEADER_FIELDS[name].search(header)
    if match is None:
        if default is None:
            raise ParseError(f"header has no {name.upper()} entry", 1)
        return default
    return int(match.group(1))


def read_fcidump(text: str) -> FcidumpIntegrals:
    lines = text.splitlines()
    header, start = _split_header(lines)
    norb = _header_value(header, "norb")
    if norb < 1:
        raise ParseError(f"NORB must be >= 1, got {norb}", 1)
    nelec = _header_value(header, "nelec", 0)
    ms2 = _header_value(header, "ms2", 0)

    core = 0.0
    h1 = np.zeros((norb, norb))
    eri = np.zeros((norb,) * 4)
    for line_number in range(start + 1, len(lines) + 1):
        tokens = lines[line_number - 1].split()
        if not tokens:
            continue
        if not _is_data_line(tokens):
            raise ParseError(f"expected 'value i j k l', got {lines[line_number - 1].strip()!r}", line_number)
        value = float(tokens[0].replace("D", "E").replace("d", "e"))
        i, j, k, l = (int(t) for t in tokens[1:])
        if min(i, j, k, l) < 0 or max(i, j, k, l) > norb:
            raise ParseError(f"orbital index out of range 0..{norb}", line_number)

        if i == j == k == l == 0:
            core = value
        elif k == 0 and l == 0:
            if j == 0:
                continue
            if i == 0:
                raise ParseError("one-electron integral with a zero index", line_number)
            h1[i - 1, j - 1] = h1[j - 1, i - 1] = value
        elif min(i, j, k, l) == 0:
            raise ParseError("two-electron integral with a zero index", line_number)
        else:
            p, q, r, s = i - 1, j - 1, k - 1, l - 1
            for a, b, c, d in (
                (p, q, r, s), (q, p, r, s), (p, q, s, r), (q, p, s, r),
                (r, s, p, q), (s, r, p, q), (r, s, q, p), (s, r, q, p),
            ):
                eri[a, b, c, d] = value

    logger.info("FCIDUMP: NORB=%d NELEC=%d MS2=%d core=%.12g", norb, nelec, ms2, core)
    return FcidumpIntegrals(norb, nelec, ms2, core, h1, eri)


def spin_mode(orbital: int, spin: int) -> int:
    return 2 * orbital + spin


def fermion_operator_from_integrals(
    one_body: np.ndarray, two_body: np.ndarray, core_energy: float = 0.0, tol: float = 0.0
) -> FermionOperator:
    """
    H = core + sum h_pq a+_ps a_qs + 1/2 sum (pq|rs) a+_ps a+_rt a_st a_qs
    over spins s, t with chemist-notation (pq|rs).
    """
    norb = one_body.shape[0]
    terms: List[FermionTerm] = []
    for p, q in zip(*np.nonzero(np.abs(one_body) > tol)):
        for spin in (0, 1):
            terms.append(
                FermionTerm.from_ops(one_body[p, q], [(spin_mode(p, spin), True), (spin_mode(q, spin), False)])
            )
    for p, q, r, s in zip(*np.nonzero(np.abs(two_body) > tol)):
        for sigma in (0, 1):
            for tau in (0, 1):
                ps, qs = spin_mode(p, sigma), spin_mode(q, sigma)
                rt, st = spin_mode(r, tau), spin_mode(s, tau)
                if ps == rt or qs == st:
                    continue
                terms.append(
                    FermionTerm.from_ops(
                        0.5 * two_body[p, q, r, s],
                        [(ps, True), (rt, True), (st, False), (qs, False)],
                    )
                )
    return FermionOperator.build(terms, 2 * norb, constant=core_energy)


def parse_fcidump(text: str) -> FermionOperator:
    return read_fcidump(text).to_fermion_operator()
