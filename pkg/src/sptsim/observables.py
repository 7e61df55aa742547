"""String order parameters, occupancies, post-selection and shot statistics.

The string correlator evaluated on a Z-basis configuration is::

    v = (z_n + z_{n+1}) * (-1)^(# occupied sites in the string) * (z_r + z_{r+1})

with left pair ``(n, n+1)``, right pair ``(r, r+1)`` where ``r = n + L - 3``,
and the string covering sites ``n+2 .. r-1``. The order parameter is ``-<v>``;
reported values are absolute. For ``n = 1`` the right pair is the last two
sites; for ``n = 0`` the window is the mirror image of ``n = 1`` on odd
chains, so both phases are measured by congruent correlators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigurationError
from .statevector import ShotSet, State, basis_bits


@dataclass(frozen=True)
class StringOrderSpec:
    n_sites: int
    n: int

    def __post_init__(self):
        if self.n < 0 or self.right_pair[1] >= self.n_sites or not self.string_range:
            raise ConfigurationError(f"no string window for n={self.n} on {self.n_sites} sites")

    @property
    def left_pair(self) -> tuple[int, int]:
        return self.n, self.n + 1

    @property
    def right_pair(self) -> tuple[int, int]:
        r = self.n + self.n_sites - 3
        return r, r + 1

    @property
    def string_range(self) -> range:
        return range(self.n + 2, self.right_pair[0])


def _correlator(bits: np.ndarray, spec: StringOrderSpec) -> np.ndarray:
    """Per-configuration value v for rows of a (K, L) occupation table."""
    bits = np.asarray(bits, dtype=np.int64)
    z = 1 - 2 * bits
    (l0, l1), (r0, r1) = spec.left_pair, spec.right_pair
    string = spec.string_range
    parity = 1 - 2 * (bits[:, string.start:string.stop].sum(axis=1) % 2)
    return (z[:, l0] + z[:, l1]) * parity * (z[:, r0] + z[:, r1])


def post_select(shots: ShotSet, target_sz: int) -> ShotSet:
    """Keep bitstrings whose total Z equals ``target_sz``.

    An empty result is returned as an empty ShotSet with ``retention == 0``.
    """
    sz = shots.n_sites - 2 * shots.shots.astype(np.int64).sum(axis=1)
    keep = shots.shots[sz == target_sz]
    retention = len(keep) / len(shots) if len(shots) else 0.0
    return ShotSet(
        shots.n_sites,
        keep,
        seed=shots.seed,
        post_selected=True,
        target_sz=target_sz,
        retention=retention * shots.retention,
        meta=dict(shots.meta),
    )


def project_sector(state: State, target_sz: int) -> tuple[State, float]:
    """Exact analogue of post-selection: the normalized sector component and its weight."""
    bits = basis_bits(state.n_sites)
    keep = (state.n_sites - 2 * bits.sum(axis=1)) == target_sz
    amps = np.where(keep, state.amplitudes, 0.0)
    weight = float(np.sum(np.abs(amps) ** 2))
    if weight == 0.0:
        raise ConfigurationError(f"state has no weight in the S_z = {target_sz} sector")
    return State(state.n_sites, amps / math.sqrt(weight)), weight


def string_order_shots(shots: ShotSet, spec: StringOrderSpec) -> float:
    if len(shots) == 0:
        raise ConfigurationError("string order undefined on an empty shot set")
    return float(-np.mean(_correlator(shots.shots, spec)))


def string_order_exact(state: State, spec: StringOrderSpec) -> float:
    bits = basis_bits(state.n_sites)
    return float(-np.sum(state.probabilities * _correlator(bits, spec)))


def string_order_pair(source, n_sites: int) -> tuple[float, float]:
    """(|O_z0|, |O_z1|) from either a State or a ShotSet."""
    fn = string_order_exact if isinstance(source, State) else string_order_shots
    return tuple(abs(fn(source, StringOrderSpec(n_sites, n))) for n in (0, 1))


def occupancy(source, site: int) -> float:
    """Probability that ``site`` is occupied (bit 1): (1 - <Z>)/2."""
    if isinstance(source, State):
        if not 0 <= site < source.n_sites:
            raise ConfigurationError(f"site {site} out of range")
        bit = (np.arange(2**source.n_sites) >> site) & 1
        return float(np.sum(source.probabilities * bit))
    if len(source) == 0:
        raise ConfigurationError("occupancy undefined on an empty shot set")
    if not 0 <= site < source.n_sites:
        raise ConfigurationError(f"site {site} out of range")
    return float(np.mean(source.shots[:, site]))


def occupancy_profile(source) -> np.ndarray:
    return np.array([occupancy(source, j) for j in range(source.n_sites)])


@dataclass(frozen=True)
class Aggregate:
    mean: float
    stddev: float
    n: int

    @property
    def defined(self) -> bool:
        return self.n >= 2


def aggregate(runs) -> Aggregate:
    """Sample mean and sample (ddof=1) standard deviation; stddev is NaN below two runs."""
    runs = np.asarray(list(runs), dtype=float)
    if runs.size == 0:
        raise ConfigurationError("no runs to aggregate")
    std = float(np.std(runs, ddof=1)) if runs.size >= 2 else math.nan
    return Aggregate(float(np.mean(runs)), std, int(runs.size))


def binomial_sigma(p: float, n: int) -> float:
    return math.sqrt(max(p * (1 - p), 0.0) / n)


# --- shot dump format ------------------------------------------------------

def dump_shots(shots: ShotSet) -> str:
    """Header ``# sites=L seed=S postselected=B`` then one bitstring per line, site 0 first."""
    head = f"# sites={shots.n_sites} seed={shots.seed} postselected={str(shots.post_selected).lower()}"
    rows = ["".join("1" if b else "0" for b in row) for row in shots.shots]
    return "\n".join([head, *rows]) + "\n"


def load_shots(text: str) -> ShotSet:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("#"):
        raise ConfigurationError("shot dump is missing its header line")
    fields = dict(tok.split("=", 1) for tok in lines[0][1:].split())
    n_sites = int(fields["sites"])
    seed = None if fields.get("seed", "None") == "None" else int(fields["seed"])
    rows = []
    for lineno, ln in enumerate(lines[1:], 2):
        if len(ln) != n_sites or set(ln) - {"0", "1"}:
            raise ConfigurationError(f"line {lineno}: bad bitstring {ln!r}")
        rows.append([int(ch) for ch in ln])
    return ShotSet(
        n_sites,
        np.array(rows, dtype=np.int8).reshape(-1, n_sites),
        seed=seed,
        post_selected=fields.get("postselected", "false") == "true",
    )


def write_shots(shots: ShotSet, path) -> None:
    Path(path).write_text(dump_shots(shots))
