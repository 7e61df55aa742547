"""Spin-chain Hamiltonians and the exact-diagonalization baseline.

Target Hamiltonian (open chain, site 0 even)::

    H_T = -sum_k [ J1' (XX + YY)_{2k,2k+1} + J1 (XX + YY)_{2k+1,2k+2}
                   + J2 (XX + YY)_{k,k+2} ]

Initial Hamiltonian: ``H_I = -Bz sum_k (-1)^k Z_k``. Its ground state for
``Bz > 0`` is the occupation pattern 0101...0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, ResourceError, ScheduleError
from .statevector import State, basis_bits, neel_bits, total_sz

MAX_DENSE_SITES = 14

_PAULI = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class CouplingParams:
    j1: float
    j1p: float
    j2: float
    bz: float

    def __post_init__(self):
        for name in ("j1", "j1p", "j2", "bz"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigurationError(f"{name} must be finite")


@dataclass(frozen=True)
class Term:
    coeff: float
    paulis: tuple[tuple[int, str], ...]  # ((site, 'X'|'Y'|'Z'), ...), sorted by site


@dataclass(frozen=True)
class TermList:
    n_sites: int
    terms: tuple[Term, ...] = field(default_factory=tuple)

    def __post_init__(self):
        for t in self.terms:
            if not 1 <= len(t.paulis) <= 2:
                raise ConfigurationError("terms must act on 1 or 2 sites")
            for site, p in t.paulis:
                if not 0 <= site < self.n_sites or p not in _PAULI:
                    raise ConfigurationError(f"bad Pauli factor {(site, p)}")

    def __len__(self):
        return len(self.terms)

    def scaled(self, factor: float) -> "TermList":
        return TermList(self.n_sites, tuple(Term(factor * t.coeff, t.paulis) for t in self.terms))


@dataclass(frozen=True)
class PhasePreset:
    name: str
    params: CouplingParams
    t_total: float = 3.0
    dt: float = 0.25


PRESETS = {
    "ed": PhasePreset("ed", CouplingParams(j1=0.2, j1p=-1.5, j2=-0.1, bz=2.5)),
    "sd": PhasePreset("sd", CouplingParams(j1=1.5, j1p=-0.2, j2=-0.1, bz=2.5)),
    "ed-supplement": PhasePreset("ed-supplement", CouplingParams(j1=0.2, j1p=-1.0, j2=-0.1, bz=1.5)),
}


def get_preset(name: str) -> PhasePreset:
    try:
        return PRESETS[name.lower()]
    except KeyError:
        raise ConfigurationError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


def hopping_bonds(params: CouplingParams, n_sites: int) -> list[tuple[int, int, float]]:
    """(a, b, J) for every XX+YY bond, ordered even->odd NN, odd->even NN, NNN."""
    even = [(k, k + 1, params.j1p) for k in range(0, n_sites - 1, 2)]
    odd = [(k, k + 1, params.j1) for k in range(1, n_sites - 1, 2)]
    nnn = [(k, k + 2, params.j2) for k in range(n_sites - 2)]
    return even + odd + nnn


def target_hamiltonian(params: CouplingParams, n_sites: int) -> TermList:
    if n_sites < 3:
        raise ConfigurationError("target Hamiltonian needs at least 3 sites")
    terms = []
    for a, b, j in hopping_bonds(params, n_sites):
        if j == 0:
            continue
        terms.append(Term(-j, ((a, "X"), (b, "X"))))
        terms.append(Term(-j, ((a, "Y"), (b, "Y"))))
    return TermList(n_sites, tuple(terms))


def initial_hamiltonian(bz: float, n_sites: int) -> TermList:
    if n_sites < 1:
        raise ConfigurationError("need at least one site")
    return TermList(
        n_sites, tuple(Term(-bz * (-1) ** k, ((k, "Z"),)) for k in range(n_sites))
    )


def interpolated(hi: TermList, ht: TermList, s: float) -> TermList:
    """(1 - s) H_I + s H_T as a concatenated term list."""
    if not 0.0 <= s <= 1.0:
        raise ScheduleError(f"s={s} outside [0, 1]")
    if hi.n_sites != ht.n_sites:
        raise ConfigurationError("Hamiltonians act on different chain lengths")
    return TermList(hi.n_sites, hi.scaled(1.0 - s).terms + ht.scaled(s).terms)


def _term_matrix(term: Term, n_sites: int, bits: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sparse action of a Pauli string: returns (column index map, value) per basis row."""
    idx = np.arange(2**n_sites)
    flip = 0
    phase = np.ones(2**n_sites, dtype=complex)
    for site, p in term.paulis:
        b = bits[:, site]
        if p in ("X", "Y"):
            flip |= 1 << site
        if p == "Y":
            phase *= np.where(b == 0, 1j, -1j)
        elif p == "Z":
            phase *= 1 - 2 * b
    # P|i> = phase[i] |i ^ flip>
    return idx ^ flip, phase


def dense_matrix(h: TermList) -> np.ndarray:
    if h.n_sites > MAX_DENSE_SITES:
        raise ResourceError(f"dense matrix limited to {MAX_DENSE_SITES} sites")
    dim = 2**h.n_sites
    bits = basis_bits(h.n_sites)
    mat = np.zeros((dim, dim), dtype=complex)
    cols = np.arange(dim)
    for term in h.terms:
        rows, phase = _term_matrix(term, h.n_sites, bits)
        mat[rows, cols] += term.coeff * phase
    return mat


def ground_state(h: TermList, sz_sector: int | None = None) -> tuple[float, State]:
    """Lowest eigenpair of ``h``, optionally restricted to a total-Z sector.

    The eigenvector's global phase is fixed so that its largest-magnitude
    amplitude is real and positive.
    """
    mat = dense_matrix(h)
    dim = mat.shape[0]
    if sz_sector is None:
        sel = np.arange(dim)
    else:
        sel = np.flatnonzero(total_sz(h.n_sites) == sz_sector)
        if sel.size == 0:
            raise ConfigurationError(f"total-Z sector {sz_sector} is empty for {h.n_sites} sites")
    w, v = np.linalg.eigh(mat[np.ix_(sel, sel)])
    vec = v[:, 0]
    k = np.argmax(np.abs(vec))
    vec = vec * (abs(vec[k]) / vec[k])
    amps = np.zeros(dim, dtype=complex)
    amps[sel] = vec
    return float(w[0]), State(h.n_sites, amps)


def neel_sector(n_sites: int) -> int:
    """Total Z of the 0101...0 start state (+1 for odd chains)."""
    return int(sum(1 - 2 * b for b in neel_bits(n_sites)))


def target_ground_state(params: CouplingParams, n_sites: int) -> tuple[float, State]:
    """Ground state of H_T in the sector reachable from the Neel start."""
    return ground_state(target_hamiltonian(params, n_sites), neel_sector(n_sites))


def pauli_string_oracle(term: Term, n_sites: int) -> np.ndarray:
    """Kronecker-product embedding of one Pauli string (slow, independent path)."""
    ops = {site: _PAULI[p] for site, p in term.paulis}
    mat = np.ones((1, 1), dtype=complex)
    # kron order: most significant site first
    for site in reversed(range(n_sites)):
        mat = np.kron(mat, ops.get(site, np.eye(2)))
    return term.coeff * mat
