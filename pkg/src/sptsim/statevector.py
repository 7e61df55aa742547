"""Dense statevector primitives.

Bit convention used everywhere in the package: basis index ``i`` has bit
``j`` equal to the occupation ``b_j`` of site ``j`` (site 0 is the least
significant bit), and the Pauli-Z eigenvalue of site ``j`` is ``1 - 2 b_j``.

Two-qubit matrices act on the ordered pair ``(site_a, site_b)`` in the basis
``|b_a b_b>`` = ``|00>, |01>, |10>, |11>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, NumericalError

UNITARY_ATOL = 1e-10


@dataclass(frozen=True)
class State:
    n_sites: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (2**self.n_sites,):
            raise ConfigurationError(
                f"expected {2**self.n_sites} amplitudes for {self.n_sites} sites, got {amps.shape}"
            )
        object.__setattr__(self, "amplitudes", amps)

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass
class ShotSet:
    """Measured Z-basis bitstrings, one row per shot, column ``j`` = site ``j``."""

    n_sites: int
    shots: np.ndarray
    seed: int | None = None
    post_selected: bool = False
    target_sz: int | None = None
    retention: float = 1.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        shots = np.asarray(self.shots, dtype=np.int8)
        if shots.ndim == 1 and shots.size == 0:
            shots = shots.reshape(0, self.n_sites)
        if shots.ndim != 2 or shots.shape[1] != self.n_sites:
            raise ConfigurationError(f"bitstrings must have length {self.n_sites}")
        self.shots = shots

    def __len__(self) -> int:
        return self.shots.shape[0]

    @property
    def z(self) -> np.ndarray:
        return 1 - 2 * self.shots.astype(np.int64)


def basis_bits(n_sites: int) -> np.ndarray:
    """(2^L, L) table of site occupations for every basis index."""
    idx = np.arange(2**n_sites)
    return ((idx[:, None] >> np.arange(n_sites)) & 1).astype(np.int8)


def bits_to_index(bits) -> int:
    return int(sum(int(b) << j for j, b in enumerate(bits)))


def index_to_bits(index: int, n_sites: int) -> np.ndarray:
    return np.array([(index >> j) & 1 for j in range(n_sites)], dtype=np.int8)


def init_basis_state(n_sites: int, bits) -> State:
    bits = list(bits)
    if len(bits) != n_sites:
        raise ConfigurationError(f"bitstring length {len(bits)} != n_sites {n_sites}")
    if any(b not in (0, 1) for b in bits):
        raise ConfigurationError("bits must be 0 or 1")
    amps = np.zeros(2**n_sites, dtype=complex)
    amps[bits_to_index(bits)] = 1.0
    return State(n_sites, amps)


def neel_bits(n_sites: int) -> list[int]:
    """Occupation pattern 0101...0 (odd sites occupied)."""
    return [k % 2 for k in range(n_sites)]


def check_unitary(u: np.ndarray, atol: float = UNITARY_ATOL) -> None:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise NumericalError(f"gate matrix must be square, got shape {u.shape}")
    err = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
    if err > atol:
        raise NumericalError(f"matrix is not unitary (max deviation {err:.3e})")


# Array-level kernels. psi is viewed as a tensor of shape (2,)*L where site j
# lives on axis L-1-j (C order, site 0 = least significant bit).

def _axis(n_sites: int, site: int) -> int:
    return n_sites - 1 - site


def apply_1q_array(psi: np.ndarray, u: np.ndarray, site: int, n_sites: int) -> np.ndarray:
    t = psi.reshape((2,) * n_sites)
    ax = _axis(n_sites, site)
    t = np.tensordot(u, t, axes=([1], [ax]))
    return np.moveaxis(t, 0, ax).reshape(-1)


def apply_2q_array(
    psi: np.ndarray, u: np.ndarray, site_a: int, site_b: int, n_sites: int
) -> np.ndarray:
    t = psi.reshape((2,) * n_sites)
    ax_a, ax_b = _axis(n_sites, site_a), _axis(n_sites, site_b)
    t = np.tensordot(u.reshape(2, 2, 2, 2), t, axes=([2, 3], [ax_a, ax_b]))
    return np.moveaxis(t, [0, 1], [ax_a, ax_b]).reshape(-1)


def _check_site(state: State, site: int) -> None:
    if not 0 <= site < state.n_sites:
        raise ConfigurationError(f"site {site} out of range for {state.n_sites} sites")


def apply_one_qubit(state: State, u, site: int, check: bool = True) -> State:
    u = np.asarray(u, dtype=complex)
    _check_site(state, site)
    if u.shape != (2, 2):
        raise NumericalError(f"one-qubit gate must be 2x2, got {u.shape}")
    if check:
        check_unitary(u)
    return State(state.n_sites, apply_1q_array(state.amplitudes, u, site, state.n_sites))


def apply_two_qubit(state: State, u, site_a: int, site_b: int, check: bool = True) -> State:
    u = np.asarray(u, dtype=complex)
    _check_site(state, site_a)
    _check_site(state, site_b)
    if site_a == site_b:
        raise ConfigurationError("two-qubit gate needs two distinct sites")
    if u.shape != (4, 4):
        raise NumericalError(f"two-qubit gate must be 4x4, got {u.shape}")
    if check:
        check_unitary(u)
    return State(
        state.n_sites, apply_2q_array(state.amplitudes, u, site_a, site_b, state.n_sites)
    )


def inner_product(a: State, b: State) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    if a.amplitudes.shape != b.amplitudes.shape:
        raise ConfigurationError("states have different dimensions")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def expectation_z(state: State, site: int) -> float:
    _check_site(state, site)
    bit = (np.arange(2**state.n_sites) >> site) & 1
    return float(np.sum(state.probabilities * (1 - 2 * bit)))


def total_sz(n_sites: int) -> np.ndarray:
    """Sum of Z eigenvalues for every basis index."""
    return n_sites - 2 * basis_bits(n_sites).sum(axis=1).astype(np.int64)


def sample(state: State, shots: int, seed: int) -> ShotSet:
    """Draw Z-basis bitstrings by inverse-CDF sampling with ``numpy.random.default_rng``."""
    if shots < 1:
        raise ConfigurationError("shots must be >= 1")
    cdf = np.cumsum(state.probabilities)
    cdf /= cdf[-1]
    rng = np.random.default_rng(seed)
    idx = np.searchsorted(cdf, rng.random(shots), side="right")
    idx = np.minimum(idx, cdf.size - 1)
    bits = ((idx[:, None] >> np.arange(state.n_sites)) & 1).astype(np.int8)
    return ShotSet(state.n_sites, bits, seed=seed)
