"""Fit shallow brick-layer circuits to states along the adiabatic trajectory.

Ansatz with ``M`` rounds on ``L`` sites: each round is a PhasedXZ layer on
every site followed by SqrtISwapDagger on the even bonds (0,1), (2,3), ...
and then on the odd bonds (1,2), (3,4), ...; a final PhasedXZ layer closes
the circuit. Parameters are the (a, x, z) triples of the PhasedXZ gates,
ordered layer by layer and site by site.

Gradients of the infidelity are computed by a forward/backward (adjoint)
sweep over the statevector; they are exact up to rounding.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .circuits import (
    SQRT_ISWAP_DAGGER,
    Circuit,
    Gate,
    Schedule,
    asp_circuit,
    simulate,
    x_pow,
    z_pow,
)
from .errors import ConfigurationError
from .model import PhasePreset
from .statevector import State, apply_1q_array, apply_2q_array, init_basis_state

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class AnsatzSpec:
    n_sites: int
    m_rounds: int

    def __post_init__(self):
        if self.m_rounds < 1:
            raise ConfigurationError("ansatz needs at least one round")
        if self.n_sites < 2:
            raise ConfigurationError("ansatz needs at least two sites")

    @property
    def bonds(self) -> list[tuple[int, int]]:
        even = [(k, k + 1) for k in range(0, self.n_sites - 1, 2)]
        odd = [(k, k + 1) for k in range(1, self.n_sites - 1, 2)]
        return even + odd

    @property
    def n_two_qubit(self) -> int:
        return len(self.bonds) * self.m_rounds

    @property
    def n_single_qubit(self) -> int:
        return self.n_sites * (self.m_rounds + 1)

    @property
    def n_params(self) -> int:
        return 3 * self.n_single_qubit

    def circuit(self, params) -> Circuit:
        params = np.asarray(params, dtype=float).reshape(self.m_rounds + 1, self.n_sites, 3)
        gates = []
        for layer in range(self.m_rounds + 1):
            for site in range(self.n_sites):
                gates.append(Gate("PhasedXZ", tuple(params[layer, site]), (site,)))
            if layer < self.m_rounds:
                gates.extend(Gate("SqrtISwapDagger", (), bond) for bond in self.bonds)
        return Circuit(self.n_sites, gates)


def build_ansatz(n_sites: int, m_rounds: int) -> AnsatzSpec:
    return AnsatzSpec(n_sites, m_rounds)


# PhasedXZ(a, x, z) = Z^z Z^a X^x Z^-a and its partial derivatives (half-turn units).

def _pxz_with_grads(a: float, x: float, z: float):
    za, zma, zz, xx = z_pow(a), z_pow(-a), z_pow(z), x_pow(x)
    dz_gen = np.diag([0.0, 1j * math.pi])
    g = np.exp(1j * math.pi * x)
    dxx = 0.5j * math.pi * g * np.array([[1, -1], [-1, 1]])
    u = zz @ za @ xx @ zma
    du_da = zz @ (dz_gen @ za @ xx @ zma - za @ xx @ dz_gen @ zma)
    du_dx = zz @ za @ dxx @ zma
    du_dz = dz_gen @ u
    return u, (du_da, du_dx, du_dz)


class _Objective:
    """Infidelity 1 - |<target|C(p)|initial>|^2 with an adjoint gradient."""

    def __init__(self, spec: AnsatzSpec, target: State, initial: State):
        if target.n_sites != spec.n_sites or initial.n_sites != spec.n_sites:
            raise ConfigurationError("state and ansatz widths differ")
        self.spec = spec
        self.target = target.amplitudes
        self.initial = initial.amplitudes
        self.n_evals = 0

    def value(self, p) -> float:
        psi = simulate(self.spec.circuit(p), State(self.spec.n_sites, self.initial)).amplitudes
        return float(np.clip(1.0 - abs(np.vdot(self.target, psi)) ** 2, 0.0, 1.0))

    def value_and_grad(self, p):
        self.n_evals += 1
        spec, L = self.spec, self.spec.n_sites
        p = np.asarray(p, dtype=float).reshape(spec.m_rounds + 1, L, 3)
        mats = [[_pxz_with_grads(*p[layer, site]) for site in range(L)] for layer in range(spec.m_rounds + 1)]
        n_dag = SQRT_ISWAP_DAGGER.conj().T

        # forward: keep the state entering each single-qubit gate
        psi = self.initial
        entering = []
        for layer in range(spec.m_rounds + 1):
            row = []
            for site in range(L):
                row.append(psi)
                psi = apply_1q_array(psi, mats[layer][site][0], site, L)
            entering.append(row)
            if layer < spec.m_rounds:
                for a, b in spec.bonds:
                    psi = apply_2q_array(psi, SQRT_ISWAP_DAGGER, a, b, L)
        overlap = np.vdot(self.target, psi)

        # backward: lam = (gates after this point)^dagger |target>
        grad = np.zeros_like(p)
        lam = self.target
        for layer in reversed(range(spec.m_rounds + 1)):
            if layer < spec.m_rounds:
                for a, b in reversed(spec.bonds):
                    lam = apply_2q_array(lam, n_dag, a, b, L)
            for site in reversed(range(L)):
                u, dus = mats[layer][site]
                lam = apply_1q_array(lam, u.conj().T, site, L)
                # lam is now positioned before gate; contract d(gate) between
                after_lam = apply_1q_array(lam, u, site, L)
                phi_in = entering[layer][site]
                for k, du in enumerate(dus):
                    d_overlap = np.vdot(after_lam, apply_1q_array(phi_in, du, site, L))
                    grad[layer, site, k] = -2.0 * np.real(np.conj(overlap) * d_overlap)
        value = float(np.clip(1.0 - abs(overlap) ** 2, 0.0, 1.0))
        return value, grad.reshape(-1)


def infidelity(spec: AnsatzSpec, params, target: State, initial: State) -> float:
    return _Objective(spec, target, initial).value(params)


def infidelity_and_grad(spec: AnsatzSpec, params, target: State, initial: State):
    return _Objective(spec, target, initial).value_and_grad(params)


@dataclass
class OptimizeOptions:
    max_iters: int = 500
    tolerance: float = 1e-4
    n_restarts: int = 3
    seed: int = 0
    init_scale: float = 0.05


@dataclass
class FitResult:
    params: np.ndarray
    infidelity: float
    converged: bool
    n_iters: int
    n_evals: int


def optimize(
    spec: AnsatzSpec,
    target: State,
    initial: State,
    opts: OptimizeOptions | None = None,
    x0=None,
) -> FitResult:
    """Best-of-restarts L-BFGS fit of the ansatz.

    Restart 0 starts at ``x0`` when given (warm start); other restarts start
    from small seeded random angles. Returns the best result found together
    with a convergence flag rather than raising on non-convergence.
    """
    opts = opts or OptimizeOptions()
    rng = np.random.default_rng(opts.seed)
    best: FitResult | None = None
    for r in range(max(opts.n_restarts, 1)):
        noise = opts.init_scale * rng.standard_normal(spec.n_params)
        start = np.asarray(x0, dtype=float) if (r == 0 and x0 is not None) else noise
        obj = _Objective(spec, target, initial)
        res = minimize(
            obj.value_and_grad,
            start,
            jac=True,
            method="L-BFGS-B",
            options={"maxiter": opts.max_iters, "ftol": 1e-15, "gtol": 1e-10},
            callback=_stop_below(obj, opts.tolerance),
        )
        fit = FitResult(res.x, float(res.fun), float(res.fun) < opts.tolerance, int(res.nit), obj.n_evals)
        log.debug("restart %d: infidelity %.3e after %d iterations", r, fit.infidelity, fit.n_iters)
        if best is None or fit.infidelity < best.infidelity:
            best = fit
        if best.converged:
            break
    return best


def _stop_below(obj: _Objective, threshold: float):
    def callback(intermediate_result):
        if intermediate_result.fun < threshold:
            raise StopIteration
    return callback


@dataclass
class TrajectoryPoint:
    s: float
    params: np.ndarray
    infidelity: float
    converged: bool
    n_iters: int


def trajectory_states(preset: PhasePreset, n_sites: int) -> list[tuple[float, State]]:
    """Trotter-circuit states at every step boundary, started from |0...0>."""
    sched = Schedule(preset.t_total, preset.dt)
    zero = init_basis_state(n_sites, [0] * n_sites)
    return [
        (float(sched.boundaries()[m]), simulate(asp_circuit(preset, n_sites, m), zero))
        for m in range(sched.n_steps + 1)
    ]


def recompile_trajectory(
    preset: PhasePreset,
    n_sites: int,
    m_rounds: int = 5,
    opts: OptimizeOptions | None = None,
    warm_start: bool = True,
) -> list[TrajectoryPoint]:
    """Fit the ansatz to the Trotter state at each step boundary.

    Circuits start from |0...0>. With ``warm_start`` each point starts from
    the previous solution, so points must be processed in order; cold
    starts are independent and could be run in any order.
    """
    opts = opts or OptimizeOptions()
    spec = build_ansatz(n_sites, m_rounds)
    zero = init_basis_state(n_sites, [0] * n_sites)
    out: list[TrajectoryPoint] = []
    prev = None
    for s, target in trajectory_states(preset, n_sites):
        fit = optimize(spec, target, zero, opts, x0=prev if warm_start else None)
        out.append(TrajectoryPoint(s, fit.params, fit.infidelity, fit.converged, fit.n_iters))
        log.info("s=%.3f infidelity=%.2e iters=%d", s, fit.infidelity, fit.n_iters)
        prev = fit.params
    return out


def recompiled_state(spec: AnsatzSpec, params) -> State:
    return simulate(spec.circuit(params), init_basis_state(spec.n_sites, [0] * spec.n_sites))
