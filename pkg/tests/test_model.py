import numpy as np
import pytest

from sptsim.errors import ConfigurationError, ResourceError, ScheduleError
from sptsim.model import (
    PRESETS,
    CouplingParams,
    Term,
    TermList,
    dense_matrix,
    get_preset,
    ground_state,
    hopping_bonds,
    initial_hamiltonian,
    interpolated,
    neel_sector,
    pauli_string_oracle,
    target_hamiltonian,
)
from sptsim.statevector import neel_bits, bits_to_index, total_sz

ED = PRESETS["ed"].params


def test_presets():
    assert get_preset("ED").params == CouplingParams(0.2, -1.5, -0.1, 2.5)
    assert get_preset("sd").params == CouplingParams(1.5, -0.2, -0.1, 2.5)
    assert get_preset("ed-supplement").params == CouplingParams(0.2, -1.0, -0.1, 1.5)
    for p in PRESETS.values():
        assert (p.t_total, p.dt) == (3.0, 0.25)
    with pytest.raises(ConfigurationError):
        get_preset("nope")
    with pytest.raises(ConfigurationError):
        CouplingParams(float("nan"), 0, 0, 0)


def test_bond_order_and_couplings():
    bonds = hopping_bonds(ED, 5)
    assert bonds[:2] == [(0, 1, -1.5), (2, 3, -1.5)]
    assert bonds[2:4] == [(1, 2, 0.2), (3, 4, 0.2)]
    assert [b[:2] for b in bonds[4:]] == [(0, 2), (1, 3), (2, 4)]
    assert len(target_hamiltonian(ED, 5)) == 2 * len(bonds)


def test_zero_couplings_are_dropped():
    h = target_hamiltonian(CouplingParams(1.0, 1.0, 0.0, 0.0), 5)
    assert len(h) == 2 * 4


def test_small_chains_rejected():
    with pytest.raises(ConfigurationError):
        target_hamiltonian(ED, 2)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_dense_matches_kron_oracle_per_term(n):
    h = interpolated(initial_hamiltonian(2.5, n), target_hamiltonian(ED, n), 0.3)
    total = np.zeros((2**n, 2**n), dtype=complex)
    for term in h.terms:
        single = dense_matrix(TermList(n, (term,)))
        oracle = pauli_string_oracle(term, n)
        np.testing.assert_allclose(single, oracle, atol=1e-12)
        total += oracle
    np.testing.assert_allclose(dense_matrix(h), total, atol=1e-12)


@pytest.mark.parametrize("s", [0.0, 0.4, 1.0])
def test_hermitian_and_sz_conserving(s):
    n = 7
    h = dense_matrix(interpolated(initial_hamiltonian(2.5, n), target_hamiltonian(ED, n), s))
    assert np.max(np.abs(h - h.conj().T)) < 1e-12
    sz = np.diag(total_sz(n).astype(float))
    assert np.max(np.abs(h @ sz - sz @ h)) < 1e-12


def test_yy_sign_convention():
    # YY|01> = -|10> ... check against explicit Pauli algebra
    y = np.array([[0, -1j], [1j, 0]])
    m = dense_matrix(TermList(2, (Term(1.0, ((0, "Y"), (1, "Y"))),)))
    np.testing.assert_allclose(m, np.kron(y, y), atol=0)


def test_neel_is_ground_state_of_initial_hamiltonian():
    n = 7
    e, gs = ground_state(initial_hamiltonian(2.5, n))
    assert e == pytest.approx(-2.5 * n)
    assert abs(gs.amplitudes[bits_to_index(neel_bits(n))]) == pytest.approx(1.0)
    assert neel_sector(n) == 1


def test_sector_ground_state_matches_full_spectrum():
    n = 7
    h = target_hamiltonian(ED, n)
    full = np.linalg.eigvalsh(dense_matrix(h))
    e, gs = ground_state(h, neel_sector(n))
    # the +1 and -1 sectors are mirror images, so the overall minimum is reached
    assert e == pytest.approx(full[0], abs=1e-10)
    mat = dense_matrix(h)
    np.testing.assert_allclose(mat @ gs.amplitudes, e * gs.amplitudes, atol=1e-10)
    k = np.argmax(np.abs(gs.amplitudes))
    assert gs.amplitudes[k].imag == 0 and gs.amplitudes[k].real > 0


def test_empty_sector_and_interpolation_bounds():
    h = target_hamiltonian(ED, 3)
    with pytest.raises(ConfigurationError):
        ground_state(h, 2)
    with pytest.raises(ScheduleError):
        interpolated(initial_hamiltonian(1.0, 3), h, 1.5)
    with pytest.raises(ConfigurationError):
        interpolated(initial_hamiltonian(1.0, 5), h, 0.5)


def test_dense_size_limit():
    with pytest.raises(ResourceError):
        dense_matrix(initial_hamiltonian(1.0, 15))
