"""Coherent error model for the native two-qubit gate and two mitigation schemes.

The hardware gate is the conjugate transpose of ``general_nc(theta, zeta,
chi, gamma, phi)``; at (pi/4, 0, 0, 0, 0) it is exactly ``SqrtISwapDagger``.
A parasitic ``phi`` leaves a phase ``e^{+i phi}`` on |11> (relative to |00>).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace

import numpy as np

from .circuits import (
    Circuit,
    Gate,
    Schedule,
    asp_circuit,
    cphase_sequence,
    decompose_to_native,
    general_nc,
    merge_single_qubit,
    rz,
    simulate,
    zero_state,
)
from .errors import ConfigurationError
from .model import PhasePreset
from .model import neel_sector
from .observables import StringOrderSpec, project_sector, string_order_exact

NOISE_FIELDS = ("theta", "zeta", "chi", "gamma", "phi")


@dataclass(frozen=True)
class NoiseParams:
    theta: float = math.pi / 4
    zeta: float = 0.0
    chi: float = 0.0
    gamma: float = 0.0
    phi: float = 0.0

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(getattr(self, f) for f in NOISE_FIELDS)

    def dagger_params(self) -> tuple[float, ...]:
        """GeneralNC parameters whose matrix is this gate's conjugate transpose."""
        return (-self.theta, -self.zeta, self.chi, -self.gamma, -self.phi)

    @property
    def is_ideal(self) -> bool:
        return self == NoiseParams()


def noisy_native_gate(np_: NoiseParams) -> np.ndarray:
    return general_nc(*np_.as_tuple()).conj().T


def noisy_gate(np_: NoiseParams, a: int, b: int) -> Gate:
    return Gate("GeneralNC", np_.dagger_params(), (a, b))


def _require_native(c: Circuit, allow_general: bool = True) -> None:
    for g in c.gates:
        ok = g.kind in ("PhasedXZ", "SqrtISwapDagger") or (allow_general and g.kind == "GeneralNC")
        if not ok:
            raise ConfigurationError(f"expected a native circuit, found {g.kind}")


def inject_noise(c: Circuit, np_: NoiseParams) -> Circuit:
    """Replace every SqrtISwapDagger with the noisy hardware gate."""
    _require_native(c, allow_general=False)
    gates = [
        noisy_gate(np_, *g.sites) if g.kind == "SqrtISwapDagger" else g for g in c.gates
    ]
    return Circuit(c.n_sites, gates)


def compensate_cphase(c: Circuit, phi_est: float) -> Circuit:
    """Follow each native two-qubit gate with CPhase(-phi_est) built from two more.

    Compensation gates are ideal SqrtISwapDagger; inject noise afterwards to
    make them noisy too. Gates already noisy (GeneralNC) are compensated
    but their compensation stays ideal.
    """
    _require_native(c)
    items: list = []
    for g in c.gates:
        items.append(g)
        if g.is_two_qubit:
            seq = cphase_sequence(-phi_est, *g.sites)
            items.extend(seq)
    return merge_single_qubit(c.n_sites, items)


def split_phase_z(c: Circuit, phi_est: float) -> Circuit:
    """Insert Rz(-phi_est/2) on both qubits before each native two-qubit gate."""
    _require_native(c)
    if phi_est == 0.0:
        return c
    gates: list[Gate] = []
    z = Gate("PhasedXZ", (0.0, 0.0, -phi_est / (2 * math.pi)), (0,))
    for g in c.gates:
        if g.is_two_qubit:
            for site in g.sites:
                gates.append(replace(z, sites=(site,)))
        gates.append(g)
    return Circuit(c.n_sites, gates)


def split_phase_matrix(phi_est: float) -> np.ndarray:
    """4x4 matrix of the two inserted Rz(-phi_est/2) rotations."""
    r = rz(-phi_est / 2)
    return np.kron(r, r)


# --- trajectories and sweeps -----------------------------------------------

MITIGATIONS = ("none", "cphase", "zsplit")


def noisy_native_circuit(
    preset: PhasePreset,
    n_sites: int,
    upto_step: int,
    noise: NoiseParams | None = None,
    mitigation: str = "none",
    phi_est: float | None = None,
) -> Circuit:
    """Non-recompiled native ASP circuit with optional mitigation and noise."""
    if mitigation not in MITIGATIONS:
        raise ConfigurationError(f"unknown mitigation {mitigation!r}")
    noise = noise or NoiseParams()
    phi_est = noise.phi if phi_est is None else phi_est
    circ = decompose_to_native(asp_circuit(preset, n_sites, upto_step))
    if mitigation == "cphase":
        circ = compensate_cphase(circ, phi_est)
    elif mitigation == "zsplit":
        circ = split_phase_z(circ, phi_est)
    return inject_noise(circ, noise)


def noisy_trajectory(
    preset: PhasePreset,
    n_sites: int,
    noise: NoiseParams | None = None,
    mitigation: str = "none",
    phi_est: float | None = None,
    n: int = 1,
    postselect: bool = True,
) -> list[tuple[float, float]]:
    """(s, |O_zn|) at every Trotter-step boundary, exact expectations.

    With ``postselect`` the expectation is taken in the Neel S_z sector,
    the infinite-shot limit of post-selected sampling. Only circuits with
    noisy compensation gates leave that sector.
    """
    sched = Schedule(preset.t_total, preset.dt)
    spec = StringOrderSpec(n_sites, n)
    out = []
    for m, s in enumerate(sched.boundaries()):
        circ = noisy_native_circuit(preset, n_sites, m, noise, mitigation, phi_est)
        state = simulate(circ, zero_state(n_sites))
        if postselect:
            state, _ = project_sector(state, neel_sector(n_sites))
        out.append((float(s), abs(string_order_exact(state, spec))))
    return out


@dataclass
class SweepRow:
    param: str
    value: float
    s: float
    abs_oz1: float


def sweep(param: str, values, preset: PhasePreset, n_sites: int = 7) -> list[SweepRow]:
    """One noisy trajectory per value of ``param``; other parameters stay ideal."""
    if param not in NOISE_FIELDS:
        raise ConfigurationError(f"cannot sweep {param!r}; choose from {NOISE_FIELDS}")
    values = list(values)
    if not values:
        raise ConfigurationError("sweep needs at least one value")
    rows = []
    for v in values:
        np_ = replace(NoiseParams(), **{param: float(v)})
        for s, o in noisy_trajectory(preset, n_sites, np_):
            rows.append(SweepRow(param, float(v), s, o))
    return rows


def sweep_csv(rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["param", "value", "s", "abs_Oz1"])
    for r in rows:
        w.writerow([r.param, repr(r.value), repr(r.s), repr(r.abs_oz1)])
    return buf.getvalue()


def max_final_deviation(rows: list[SweepRow], reference: float) -> float:
    """Largest |final |O_z1| - reference| over the swept values."""
    finals = {}
    for r in rows:
        if r.value not in finals or r.s >= finals[r.value][0]:
            finals[r.value] = (r.s, r.abs_oz1)
    return max(abs(o - reference) for _, o in finals.values())
