"""Command-line driver: config file in, CSV out.

Config files are plain ``key = value`` lines, optionally grouped under
``[section]`` headers; ``#`` starts a comment. Keys given before the first
header may come from any section. Unknown keys and keys under the wrong
section are rejected with the offending line number.

Example::

    preset = ed
    n_sites = 11

    [sampling]
    shots = 8192
    seed = 0
    n_seeds = 10

Exit codes: 0 success, 1 configuration error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import os
import re
import sys
import tempfile
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .circuits import Schedule, asp_circuit, decompose_to_native, simulate, zero_state
from .errors import ConfigurationError, NumericalError, ResourceError, ScheduleError
from .model import (
    CouplingParams,
    PhasePreset,
    get_preset,
    ground_state,
    initial_hamiltonian,
    interpolated,
    neel_sector,
    target_hamiltonian,
)
from .noise import (
    MITIGATIONS,
    NOISE_FIELDS,
    NoiseParams,
    compensate_cphase,
    inject_noise,
    noisy_native_circuit,
    split_phase_z,
    sweep,
    sweep_csv,
)
from .observables import (
    StringOrderSpec,
    aggregate,
    dump_shots,
    occupancy_profile,
    post_select,
    project_sector,
    string_order_exact,
    string_order_shots,
)
from .recompile import OptimizeOptions, build_ansatz, recompile_trajectory, recompiled_state
from .statevector import State, sample

log = logging.getLogger("sptsim")

CSV_VERSION = 1
MODES = ("exact", "trotter", "recompiled")


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a run needs. Defaults match the ED preset on 11 sites."""

    preset: str = "ed"
    couplings: CouplingParams | None = None
    n_sites: int = 11
    t_total: float = 3.0
    dt: float = 0.25
    s: float = 1.0
    mode: str = "trotter"
    m_rounds: int = 5
    tolerance: float = 1e-4
    max_iters: int = 500
    restarts: int = 3
    shots: int = 8192
    seed: int = 0
    n_seeds: int = 10
    postselect: bool = True
    dump_step: int | None = None
    noise: NoiseParams = field(default_factory=NoiseParams)
    mitigation: str = "none"
    phi_est: float | None = None
    sweep_param: str = "phi"
    sweep_values: tuple[float, ...] = (0.0, 0.05, 0.1, 0.2)

    @property
    def seeds(self) -> list[int]:
        return list(range(self.seed, self.seed + self.n_seeds))

    @property
    def phase(self) -> PhasePreset:
        base = get_preset(self.preset)
        return PhasePreset(base.name, self.couplings or base.params, self.t_total, self.dt)

    @property
    def schedule(self) -> Schedule:
        return Schedule(self.t_total, self.dt)

    def validate(self) -> "ExperimentConfig":
        get_preset(self.preset)
        if self.n_sites % 2 == 0:
            raise ConfigurationError(f"n_sites must be odd (edge states need an odd chain), got {self.n_sites}")
        if self.n_sites < 7:
            raise ConfigurationError("n_sites must be at least 7 for both string-order windows")
        self.schedule
        if self.mode not in MODES:
            raise ConfigurationError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.mitigation not in MITIGATIONS:
            raise ConfigurationError(f"mitigation must be one of {MITIGATIONS}, got {self.mitigation!r}")
        if self.sweep_param not in NOISE_FIELDS:
            raise ConfigurationError(f"sweep param must be one of {NOISE_FIELDS}")
        if not self.sweep_values:
            raise ConfigurationError("sweep values must not be empty")
        if self.shots < 1 or self.n_seeds < 1 or self.m_rounds < 1:
            raise ConfigurationError("shots, n_seeds and m_rounds must be >= 1")
        if not 0.0 <= self.s <= 1.0:
            raise ConfigurationError(f"s must lie in [0, 1], got {self.s}")
        if self.dump_step is not None and not 0 <= self.dump_step <= self.schedule.n_steps:
            raise ConfigurationError(f"dump_step must lie in 0..{self.schedule.n_steps}")
        return self


# --- config parsing --------------------------------------------------------

def _bool(v: str) -> bool:
    if v.lower() in ("true", "yes", "1", "on"):
        return True
    if v.lower() in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"not a boolean: {v!r}")


def _floats(v: str) -> tuple[float, ...]:
    return tuple(float(x) for x in v.replace(",", " ").split())


def _opt_int(v: str) -> int | None:
    return None if v.lower() in ("none", "last", "") else int(v)


# key -> (section, converter, ExperimentConfig field)
_KEYS = {
    "preset": ("model", str, "preset"),
    "n_sites": ("model", int, "n_sites"),
    "s": ("model", float, "s"),
    "j1": ("model", float, None),
    "j1p": ("model", float, None),
    "j2": ("model", float, None),
    "bz": ("model", float, None),
    "t_total": ("schedule", float, "t_total"),
    "dt": ("schedule", float, "dt"),
    "mode": ("schedule", str, "mode"),
    "shots": ("sampling", int, "shots"),
    "seed": ("sampling", int, "seed"),
    "n_seeds": ("sampling", int, "n_seeds"),
    "postselect": ("sampling", _bool, "postselect"),
    "dump_step": ("sampling", _opt_int, "dump_step"),
    "m_rounds": ("recompile", int, "m_rounds"),
    "tolerance": ("recompile", float, "tolerance"),
    "max_iters": ("recompile", int, "max_iters"),
    "restarts": ("recompile", int, "restarts"),
    "theta": ("noise", float, None),
    "zeta": ("noise", float, None),
    "chi": ("noise", float, None),
    "gamma": ("noise", float, None),
    "phi": ("noise", float, None),
    "mitigation": ("noise", str, "mitigation"),
    "phi_est": ("noise", float, "phi_est"),
    "param": ("sweep", str, "sweep_param"),
    "values": ("sweep", _floats, "sweep_values"),
}
SECTIONS = sorted({sec for sec, _, _ in _KEYS.values()})


def parse_config_text(text: str, source: str = "<config>") -> ExperimentConfig:
    section = None
    fields: dict = {}
    couplings: dict = {}
    noise: dict = {}
    seen: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{source}:{lineno}"
        if line.startswith("["):
            if not line.endswith("]") or line[1:-1].strip() not in SECTIONS:
                raise ConfigurationError(f"{where}: unknown section {line!r}; expected one of {SECTIONS}")
            section = line[1:-1].strip()
            continue
        if "=" not in line:
            raise ConfigurationError(f"{where}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigurationError(f"{where}: unknown key {key!r}")
        home, conv, attr = _KEYS[key]
        if section is not None and section != home:
            raise ConfigurationError(f"{where}: key {key!r} belongs in [{home}], not [{section}]")
        if key in seen:
            raise ConfigurationError(f"{where}: duplicate key {key!r} (first set on line {seen[key]})")
        seen[key] = lineno
        try:
            parsed = conv(value)
        except ValueError as exc:
            raise ConfigurationError(f"{where}: bad value for {key!r}: {exc}") from None
        if home == "noise" and attr is None:
            noise[key] = parsed
        elif attr is None:
            couplings[key] = parsed
        else:
            fields[attr] = parsed
    if couplings:
        base = get_preset(fields.get("preset", "ed")).params
        fields["couplings"] = replace(base, **couplings)
    if noise:
        fields["noise"] = NoiseParams(**noise)
    preset = get_preset(fields.get("preset", "ed"))
    fields.setdefault("t_total", preset.t_total)
    fields.setdefault("dt", preset.dt)
    try:
        return ExperimentConfig(**fields).validate()
    except (ConfigurationError, ScheduleError) as exc:
        # point at the line that set the offending key, when there is one
        key = re.match(r"\w+", str(exc))
        line = seen.get(key.group(0)) if key else None
        where = f"{source}:{line}" if line else source
        raise ConfigurationError(f"{where}: {exc}") from None


def parse_config(path) -> ExperimentConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"config file {path} does not exist")
    return parse_config_text(path.read_text(), str(path))


# --- runs ------------------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, float):
        return "nan" if math.isnan(x) else repr(x)
    return str(x)


def _csv(command: str, header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    buf.write(f"# sptsim-csv v{CSV_VERSION} command={command}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _hamiltonian_ground_state(cfg: ExperimentConfig, s: float) -> tuple[float, State]:
    p = cfg.phase.params
    h = interpolated(initial_hamiltonian(p.bz, cfg.n_sites), target_hamiltonian(p, cfg.n_sites), s)
    return ground_state(h, neel_sector(cfg.n_sites))


def run_exact(cfg: ExperimentConfig) -> str:
    """Ground state of H(s) in the Neel sector: energy, both string orders, occupancies."""
    energy, state = _hamiltonian_ground_state(cfg, cfg.s)
    rows = [["energy", energy]]
    for n in (0, 1):
        rows.append([f"abs_Oz{n}", abs(string_order_exact(state, StringOrderSpec(cfg.n_sites, n)))])
    for j, occ in enumerate(occupancy_profile(state)):
        rows.append([f"occupancy_{j}", float(occ)])
    return _csv("exact", ["observable", "value"], rows)


def _noisy(cfg: ExperimentConfig) -> bool:
    return not cfg.noise.is_ideal or cfg.mitigation != "none"


def trajectory_points(cfg: ExperimentConfig) -> list[dict]:
    """Prepared state at each step boundary, plus per-point fit diagnostics."""
    sched, L = cfg.schedule, cfg.n_sites
    points = []
    if cfg.mode == "exact":
        for s in sched.boundaries():
            points.append({"s": float(s), "state": _hamiltonian_ground_state(cfg, float(s))[1]})
    elif cfg.mode == "trotter":
        for m, s in enumerate(sched.boundaries()):
            if _noisy(cfg):
                circ = noisy_native_circuit(cfg.phase, L, m, cfg.noise, cfg.mitigation, cfg.phi_est)
            else:
                circ = asp_circuit(cfg.phase, L, m)
            points.append({"s": float(s), "state": simulate(circ, zero_state(L))})
    else:
        opts = OptimizeOptions(cfg.max_iters, cfg.tolerance, cfg.restarts, cfg.seed)
        spec = build_ansatz(L, cfg.m_rounds)
        for pt in recompile_trajectory(cfg.phase, L, cfg.m_rounds, opts):
            if _noisy(cfg):
                circ = decompose_to_native(spec.circuit(pt.params))
                if cfg.mitigation != "none":
                    phi_est = cfg.noise.phi if cfg.phi_est is None else cfg.phi_est
                    mitigate = compensate_cphase if cfg.mitigation == "cphase" else split_phase_z
                    circ = mitigate(circ, phi_est)
                state = simulate(inject_noise(circ, cfg.noise), zero_state(L))
            else:
                state = recompiled_state(spec, pt.params)
            points.append({
                "s": pt.s, "state": state, "infidelity": pt.infidelity, "converged": pt.converged,
            })
    return points


def _shots_for(cfg: ExperimentConfig, state: State, seed: int):
    shots = sample(state, cfg.shots, seed)
    if cfg.postselect:
        shots = post_select(shots, neel_sector(cfg.n_sites))
    return shots


def run_trajectory(cfg: ExperimentConfig) -> str:
    """Per-point exact expectations and seed-aggregated shot estimates."""
    L = cfg.n_sites
    specs = [StringOrderSpec(L, 0), StringOrderSpec(L, 1)]
    header = ["s", "abs_Oz0", "abs_Oz1", "mean_abs_Oz0", "std_abs_Oz0",
              "mean_abs_Oz1", "std_abs_Oz1", "retention"]
    if cfg.mode == "recompiled":
        header += ["infidelity", "converged"]
    rows = []
    for k, pt in enumerate(trajectory_points(cfg)):
        state = pt["state"]
        if cfg.postselect:
            state, _ = project_sector(state, neel_sector(L))
        exact = [abs(string_order_exact(state, sp)) for sp in specs]
        per_seed = [[], []]
        retention = []
        for seed in cfg.seeds:
            # distinct stream per (seed, point); still a pure function of the config
            shots = _shots_for(cfg, pt["state"], seed * 1000 + k)
            retention.append(shots.retention)
            if len(shots) == 0:
                raise NumericalError(f"post-selection removed every shot at s={pt['s']}")
            for i, sp in enumerate(specs):
                per_seed[i].append(abs(string_order_shots(shots, sp)))
        agg = [aggregate(v) for v in per_seed]
        row = [pt["s"], exact[0], exact[1], agg[0].mean, agg[0].stddev,
               agg[1].mean, agg[1].stddev, float(np.mean(retention))]
        if cfg.mode == "recompiled":
            row += [pt["infidelity"], pt["converged"]]
        rows.append(row)
    return _csv("trajectory", header, rows)


def run_recompile(cfg: ExperimentConfig) -> str:
    """Fit quality and the recompiled-state string order at every step boundary."""
    opts = OptimizeOptions(cfg.max_iters, cfg.tolerance, cfg.restarts, cfg.seed)
    spec = build_ansatz(cfg.n_sites, cfg.m_rounds)
    rows = []
    for pt in recompile_trajectory(cfg.phase, cfg.n_sites, cfg.m_rounds, opts):
        state = recompiled_state(spec, pt.params)
        o1 = abs(string_order_exact(state, StringOrderSpec(cfg.n_sites, 1)))
        params = " ".join(repr(float(x)) for x in pt.params)
        rows.append([pt.s, pt.infidelity, pt.converged, pt.n_iters, o1, params])
    header = ["s", "infidelity", "converged", "n_iters", "abs_Oz1", "params"]
    return _csv("recompile", header, rows)


def run_sweep(cfg: ExperimentConfig, param: str | None = None, values=None) -> str:
    """One noisy non-recompiled trajectory per value of ``param``."""
    param = param or cfg.sweep_param
    values = cfg.sweep_values if values is None else tuple(values)
    if not values:
        raise ConfigurationError("sweep needs at least one value")
    rows = sweep(param, values, cfg.phase, cfg.n_sites)
    return f"# sptsim-csv v{CSV_VERSION} command=sweep\n" + sweep_csv(rows)


def run_sample_dump(cfg: ExperimentConfig) -> str:
    """Shots at one step boundary (default: the last) for the first seed."""
    points = trajectory_points(cfg)
    k = len(points) - 1 if cfg.dump_step is None else cfg.dump_step
    return dump_shots(_shots_for(cfg, points[k]["state"], cfg.seed))


COMMANDS = {
    "exact": run_exact,
    "trajectory": run_trajectory,
    "sweep": run_sweep,
    "recompile": run_recompile,
    "sample-dump": run_sample_dump,
}


# --- entry point -----------------------------------------------------------

def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sptsim", description=__doc__.split("\n")[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", type=Path, help="key=value config file (defaults used if omitted)")
    ap.add_argument("--out", type=Path, help="output path; stdout if omitted")
    ap.add_argument("--seed", type=int, help="first sampling/optimizer seed (overrides config)")
    ap.add_argument("--no-postselect", action="store_true", help="keep shots outside the Neel S_z sector")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = parse_config(args.config) if args.config else ExperimentConfig().validate()
        if args.seed is not None:
            cfg = replace(cfg, seed=args.seed)
        if args.no_postselect:
            cfg = replace(cfg, postselect=False)
        text = COMMANDS[args.command](cfg)
    except (ConfigurationError, ScheduleError) as exc:
        print(f"sptsim: config error: {exc}", file=sys.stderr)
        return 1
    except (NumericalError, ResourceError, np.linalg.LinAlgError) as exc:
        print(f"sptsim: numerical failure: {exc}", file=sys.stderr)
        return 2
    if args.out:
        _write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
