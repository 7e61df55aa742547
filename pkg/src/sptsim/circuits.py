"""Gate vocabulary, Trotterized adiabatic circuits and native-gate compilation.

Logical gates: ``Hopping``, ``CPhase``, ``Rz``, ``Rx``, ``Ry``.
Native gates: ``PhasedXZ`` (half-turn units) and ``SqrtISwapDagger``.
``GeneralNC`` is the five-parameter number-conserving gate used by the noise
model; it is simulable but not part of either compilation vocabulary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, ScheduleError
from .model import CouplingParams, PhasePreset, hopping_bonds
from .statevector import (
    State,
    apply_1q_array,
    apply_2q_array,
    check_unitary,
    init_basis_state,
)

ONE_QUBIT = {"PhasedXZ": 3, "Rz": 1, "Rx": 1, "Ry": 1}
TWO_QUBIT = {"SqrtISwapDagger": 0, "Hopping": 1, "CPhase": 1, "GeneralNC": 5}
NATIVE = {"PhasedXZ", "SqrtISwapDagger"}


@dataclass(frozen=True)
class Gate:
    kind: str
    params: tuple[float, ...]
    sites: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        object.__setattr__(self, "sites", tuple(int(s) for s in self.sites))
        if self.kind in ONE_QUBIT:
            nparams, nsites = ONE_QUBIT[self.kind], 1
        elif self.kind in TWO_QUBIT:
            nparams, nsites = TWO_QUBIT[self.kind], 2
        else:
            raise ConfigurationError(f"unknown gate kind {self.kind!r}")
        if len(self.params) != nparams or len(self.sites) != nsites:
            raise ConfigurationError(
                f"{self.kind} takes {nparams} params and {nsites} sites, got {self.params} @ {self.sites}"
            )
        if nsites == 2 and self.sites[0] == self.sites[1]:
            raise ConfigurationError("two-qubit gate needs two distinct sites")

    @property
    def is_two_qubit(self) -> bool:
        return len(self.sites) == 2


@dataclass(frozen=True)
class Circuit:
    n_sites: int
    gates: tuple[Gate, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if any(not 0 <= s < self.n_sites for s in g.sites):
                raise ConfigurationError(f"gate {g} addresses a site outside 0..{self.n_sites - 1}")

    def __len__(self):
        return len(self.gates)

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.n_sites != self.n_sites:
            raise ConfigurationError("cannot concatenate circuits of different widths")
        return Circuit(self.n_sites, self.gates + other.gates)

    def count(self, kind: str | None = None) -> int:
        return sum(1 for g in self.gates if kind is None or g.kind == kind)

    def two_qubit_count(self) -> int:
        return sum(1 for g in self.gates if g.is_two_qubit)


@dataclass(frozen=True)
class Schedule:
    t_total: float
    dt: float

    def __post_init__(self):
        if self.t_total <= 0 or self.dt <= 0:
            raise ScheduleError("T and dt must be positive")
        if abs(self.n_steps * self.dt - self.t_total) > 1e-12:
            raise ScheduleError(f"dt={self.dt} does not divide T={self.t_total}")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_total / self.dt))

    def midpoint(self, m: int) -> float:
        """Interpolation parameter sampled by Trotter step ``m``."""
        return (m + 0.5) / self.n_steps

    def boundaries(self) -> np.ndarray:
        return np.arange(self.n_steps + 1) / self.n_steps


# --- gate matrices ---------------------------------------------------------

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.diag([1.0, -1.0]).astype(complex)


def rz(lam: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * lam), np.exp(0.5j * lam)])


def rx(lam: float) -> np.ndarray:
    c, s = math.cos(lam / 2), math.sin(lam / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def ry(lam: float) -> np.ndarray:
    c, s = math.cos(lam / 2), math.sin(lam / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def z_pow(t: float) -> np.ndarray:
    return np.diag([1.0, np.exp(1j * math.pi * t)])


def x_pow(t: float) -> np.ndarray:
    g = np.exp(1j * math.pi * t)
    return 0.5 * np.array([[1 + g, 1 - g], [1 - g, 1 + g]])


def phased_xz(a: float, x: float, z: float) -> np.ndarray:
    """Z^z Z^a X^x Z^-a: X rotation about an axis at azimuth ``a``, then a Z phase."""
    return z_pow(z) @ z_pow(a) @ x_pow(x) @ z_pow(-a)


def general_nc(theta: float, zeta: float, chi: float, gamma: float, phi: float) -> np.ndarray:
    """Five-parameter excitation-number-conserving two-qubit gate.

    Both off-diagonal entries of the single-excitation block carry ``-i``
    (the unitary fSim-family form).
    """
    c, s = math.cos(theta), math.sin(theta)
    u = np.zeros((4, 4), dtype=complex)
    u[0, 0] = 1.0
    u[1, 1] = np.exp(-1j * (gamma + zeta)) * c
    u[1, 2] = -1j * np.exp(-1j * (gamma - chi)) * s
    u[2, 1] = -1j * np.exp(-1j * (gamma + chi)) * s
    u[2, 2] = np.exp(-1j * (gamma - zeta)) * c
    u[3, 3] = np.exp(-1j * (2 * gamma + phi))
    return u


SQRT_ISWAP_DAGGER = general_nc(math.pi / 4, 0, 0, 0, 0).conj().T


def hopping(alpha: float) -> np.ndarray:
    """exp(i alpha/2 (XX + YY))."""
    c, s = math.cos(alpha), math.sin(alpha)
    u = np.eye(4, dtype=complex)
    u[1, 1] = u[2, 2] = c
    u[1, 2] = u[2, 1] = 1j * s
    return u


def cphase(phi: float) -> np.ndarray:
    return np.diag([1, 1, 1, np.exp(1j * phi)])


def gate_matrix(g: Gate) -> np.ndarray:
    p = g.params
    match g.kind:
        case "PhasedXZ":
            return phased_xz(*p)
        case "Rz":
            return rz(p[0])
        case "Rx":
            return rx(p[0])
        case "Ry":
            return ry(p[0])
        case "SqrtISwapDagger":
            return SQRT_ISWAP_DAGGER.copy()
        case "Hopping":
            return hopping(p[0])
        case "CPhase":
            return cphase(p[0])
        case "GeneralNC":
            return general_nc(*p)
    raise ConfigurationError(f"unknown gate kind {g.kind!r}")


# --- circuit construction --------------------------------------------------

def trotter_step(params: CouplingParams, s: float, dt: float, n_sites: int) -> Circuit:
    """One first-order Trotter step approximating exp(-i H(s) dt).

    Order: even->odd NN hoppings, odd->even NN hoppings, NNN hoppings, then
    one Rz per site. Hoppings with an exactly-zero angle are dropped.
    """
    if not 0.0 <= s <= 1.0:
        raise ScheduleError(f"s={s} outside [0, 1]")
    gates = []
    for a, b, j in hopping_bonds(params, n_sites):
        alpha = 2.0 * s * j * dt
        if alpha != 0.0:
            gates.append(Gate("Hopping", (alpha,), (a, b)))
    for k in range(n_sites):
        gates.append(Gate("Rz", (-2.0 * (1.0 - s) * params.bz * (-1) ** k * dt,), (k,)))
    return Circuit(n_sites, gates)


def neel_preparation(n_sites: int) -> Circuit:
    return Circuit(n_sites, [Gate("Rx", (math.pi,), (k,)) for k in range(1, n_sites, 2)])


def asp_circuit(preset: PhasePreset, n_sites: int, upto_step: int) -> Circuit:
    """Neel preparation followed by the first ``upto_step`` Trotter steps from |0...0>."""
    sched = Schedule(preset.t_total, preset.dt)
    if not 0 <= upto_step <= sched.n_steps:
        raise ScheduleError(f"upto_step={upto_step} outside 0..{sched.n_steps}")
    circ = neel_preparation(n_sites)
    for m in range(upto_step):
        circ = circ + trotter_step(preset.params, sched.midpoint(m), sched.dt, n_sites)
    return circ


# --- native compilation ----------------------------------------------------

def zxz_angles(u: np.ndarray) -> tuple[float, float, float]:
    """(phi1, theta, phi2) with u = phase * Rz(phi1) Rx(theta) Rz(phi2)."""
    u = u / np.sqrt(np.linalg.det(u))
    c, s = abs(u[0, 0]), abs(u[1, 0])
    theta = 2.0 * math.atan2(s, c)
    tol = 1e-12
    # u00 = c e^{-i(phi1+phi2)/2}, u10 = -i s e^{i(phi1-phi2)/2}
    half_sum = float(-np.angle(u[0, 0])) if c > tol else 0.0
    half_diff = float(np.angle(1j * u[1, 0])) if s > tol else 0.0
    return half_sum + half_diff, theta, half_sum - half_diff


def to_phased_xz(u: np.ndarray) -> tuple[float, float, float]:
    """PhasedXZ (a, x, z) equal to ``u`` up to global phase."""
    phi1, theta, phi2 = zxz_angles(u)
    a = -phi2 / math.pi
    x = theta / math.pi
    z = (phi1 + phi2) / math.pi
    return _wrap_half_turns(a), x, _wrap_half_turns(z)


def _wrap_half_turns(t: float) -> float:
    t = (t + 1.0) % 2.0 - 1.0
    return 0.0 if abs(t) < 1e-14 else t


def is_identity_up_to_phase(u: np.ndarray, atol: float = 1e-12) -> bool:
    return abs(abs(np.trace(u)) - u.shape[0]) < atol


def _z_split(lam: float, a: int, b: int) -> list[tuple[np.ndarray, int]]:
    # Rz(lam) on the single-excitation block: Rz(lam/2) on a, Rz(-lam/2) on b.
    return [(rz(lam / 2), a), (rz(-lam / 2), b)]


def hopping_sequence(alpha: float, a: int, b: int, echo: str = "second") -> list:
    """Hopping(alpha) as two SqrtISwapDagger gates dressed with single-qubit gates.

    Z-only dressing ``Zs(-pi/2) N Zs(pi - 2 alpha) N Zs(-pi/2)`` is exact;
    one of the two natives (``echo`` = "first" or "second") is additionally
    wrapped in X flips on both qubits, which commute with XX + YY. The echo
    cancels per-gate excitation-number phases and reduces relative-Z errors
    to a conjugation. The hopping-angle error left by the swap-phase
    parameter changes sign between the two echo placements.
    """
    n = Gate("SqrtISwapDagger", (), (a, b))
    flip = [(_X, a), (_X, b)]
    first = flip + [n] + flip if echo == "first" else [n]
    second = flip + [n] + flip if echo == "second" else [n]
    if echo not in ("first", "second"):
        raise ConfigurationError(f"echo must be 'first' or 'second', got {echo!r}")
    return (
        _z_split(-math.pi / 2, a, b)
        + first
        + _z_split(math.pi - 2.0 * alpha, a, b)
        + second
        + _z_split(-math.pi / 2, a, b)
    )


def cphase_sequence(beta: float, a: int, b: int, native: Gate | None = None) -> list:
    """CPhase(beta), |beta| <= pi, from two native two-qubit gates plus rotations.

    The native pair produces exp(i mu YY) dressed by X rotations on ``a``
    and a Y flip on ``b``, with sin(mu) = cos(u/2)/sqrt(2) for a middle
    Rx(u); mu = beta/4 is then rotated to ZZ and completed with Rz(beta/2).
    ``native`` overrides the two-qubit gate (e.g. to use noisy hardware gates).
    """
    beta = (beta + math.pi) % (2 * math.pi) - math.pi
    mu = beta / 4.0
    c = math.sqrt(2.0) * math.sin(mu)
    u = 2.0 * math.acos(c)
    s = math.sin(u / 2)
    two_alpha = math.atan2(-s, c / math.sqrt(2.0))
    n = native if native is not None else Gate("SqrtISwapDagger", (), (a, b))
    n = Gate(n.kind, n.params, (a, b))
    return [
        (rx(-math.pi / 2), a), (rx(-math.pi / 2), b),
        (rx(two_alpha), a),
        n,
        (rx(u), a), (ry(math.pi), b),
        n,
        (ry(math.pi), b), (rx(two_alpha), a),
        (rx(math.pi / 2), a), (rx(math.pi / 2), b),
        (rz(beta / 2), a), (rz(beta / 2), b),
    ]


def _logical_to_sequence(g: Gate, echo: str = "second") -> list:
    if not g.is_two_qubit:
        return [(gate_matrix(g), g.sites[0])]
    a, b = g.sites
    match g.kind:
        case "SqrtISwapDagger" | "GeneralNC":
            return [g]
        case "Hopping":
            if g.params[0] == 0.0:
                return []
            return hopping_sequence(g.params[0], a, b, echo)
        case "CPhase":
            if g.params[0] == 0.0:
                return []
            return cphase_sequence(g.params[0], a, b)
    raise ConfigurationError(f"cannot decompose {g.kind}")


def merge_single_qubit(n_sites: int, items) -> Circuit:
    """Fuse runs of 2x2 matrices per site into PhasedXZ gates; drop identities.

    ``items`` mixes two-qubit :class:`Gate` objects and ``(matrix, site)`` pairs.
    """
    pending: dict[int, np.ndarray] = {}
    out: list[Gate] = []

    def flush(site):
        u = pending.pop(site, None)
        if u is not None and not is_identity_up_to_phase(u):
            out.append(Gate("PhasedXZ", to_phased_xz(u), (site,)))

    for item in items:
        if isinstance(item, Gate):
            if item.is_two_qubit:
                for site in item.sites:
                    flush(site)
                out.append(item)
            else:
                site = item.sites[0]
                pending[site] = gate_matrix(item) @ pending.get(site, np.eye(2))
        else:
            u, site = item
            pending[site] = u @ pending.get(site, np.eye(2))
    for site in sorted(pending):
        flush(site)
    return Circuit(n_sites, out)


def decompose_to_native(c: Circuit, allow_general: bool = False) -> Circuit:
    """Rewrite ``c`` using only PhasedXZ and SqrtISwapDagger.

    Each Hopping costs two SqrtISwapDagger gates, as does each CPhase;
    zero-angle two-qubit gates vanish and adjacent single-qubit gates are
    merged. Successive Hoppings on the same bond alternate the echo
    placement (second native, then first, ...). The result equals ``c`` up
    to a global phase. ``allow_general`` passes GeneralNC gates through.
    """
    items: list = []
    seen: dict[frozenset, int] = {}
    for g in c.gates:
        if g.kind == "GeneralNC" and not allow_general:
            raise ConfigurationError("GeneralNC has no native decomposition")
        echo = "second"
        if g.kind == "Hopping" and g.params[0] != 0.0:
            k = seen.get(frozenset(g.sites), 0)
            seen[frozenset(g.sites)] = k + 1
            echo = "second" if k % 2 == 0 else "first"
        items.extend(_logical_to_sequence(g, echo))
    return merge_single_qubit(c.n_sites, items)


def native_two_qubit_counts(c: Circuit) -> dict[str, int]:
    """Raw (2 per Hopping/CPhase, no elision) and elided native two-qubit counts."""
    raw = 0
    for g in c.gates:
        if g.kind in ("Hopping", "CPhase"):
            raw += 2
        elif g.is_two_qubit:
            raw += 1
    return {"raw": raw, "elided": decompose_to_native(c).two_qubit_count()}


# --- simulation ------------------------------------------------------------

def simulate(c: Circuit, initial: State, check: bool = False) -> State:
    if initial.n_sites != c.n_sites:
        raise ConfigurationError(f"circuit has {c.n_sites} sites, state has {initial.n_sites}")
    psi = initial.amplitudes
    cache: dict[Gate, np.ndarray] = {}
    for g in c.gates:
        u = cache.get(g)
        if u is None:
            u = cache[g] = gate_matrix(g)
            if check:
                check_unitary(u)
        if g.is_two_qubit:
            psi = apply_2q_array(psi, u, g.sites[0], g.sites[1], c.n_sites)
        else:
            psi = apply_1q_array(psi, u, g.sites[0], c.n_sites)
    return State(c.n_sites, psi)


def circuit_unitary(c: Circuit) -> np.ndarray:
    """Full 2^L x 2^L matrix of ``c``, column ``i`` = image of basis state ``i``."""
    dim = 2**c.n_sites
    cols = []
    for i in range(dim):
        e = np.zeros(dim, dtype=complex)
        e[i] = 1.0
        cols.append(simulate(c, State(c.n_sites, e)).amplitudes)
    return np.stack(cols, axis=1)


def zero_state(n_sites: int) -> State:
    return init_basis_state(n_sites, [0] * n_sites)


# --- text serialization ----------------------------------------------------

def dumps(c: Circuit) -> str:
    """One gate per line: ``KIND p1,p2,... @ s1[,s2]``, preceded by a width header."""
    lines = [f"# sites={c.n_sites}"]
    for g in c.gates:
        params = ",".join(repr(p) for p in g.params)
        sites = ",".join(str(s) for s in g.sites)
        lines.append(f"{g.kind} {params} @ {sites}" if params else f"{g.kind} @ {sites}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> Circuit:
    n_sites = None
    gates = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line[1:].strip().startswith("sites="):
                n_sites = int(line[1:].strip().split("=", 1)[1])
            continue
        try:
            head, sites = line.split("@")
            parts = head.split()
            kind = parts[0]
            params = tuple(float(p) for p in parts[1].split(",")) if len(parts) > 1 else ()
            gates.append(Gate(kind, params, tuple(int(s) for s in sites.split(","))))
        except (ValueError, IndexError) as exc:
            raise ConfigurationError(f"line {lineno}: cannot parse {raw!r} ({exc})") from None
    if n_sites is None:
        n_sites = 1 + max((max(g.sites) for g in gates), default=-1)
    return Circuit(n_sites, gates)
