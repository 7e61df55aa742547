"""Statevector simulation of adiabatic preparation of SPT phases on a dimerized XY chain."""

from .circuits import Circuit, Gate, Schedule, asp_circuit, decompose_to_native, simulate
from .errors import ConfigurationError, NumericalError, ResourceError, ScheduleError
from .model import PRESETS, CouplingParams, PhasePreset, get_preset, target_ground_state
from .noise import NoiseParams, inject_noise, sweep
from .observables import StringOrderSpec, occupancy, post_select, string_order_exact, string_order_shots
from .recompile import build_ansatz, optimize, recompile_trajectory
from .statevector import ShotSet, State, sample

__version__ = "0.1.0"

__all__ = [
    "Circuit", "Gate", "Schedule", "asp_circuit", "decompose_to_native", "simulate",
    "ConfigurationError", "NumericalError", "ResourceError", "ScheduleError",
    "PRESETS", "CouplingParams", "PhasePreset", "get_preset", "target_ground_state",
    "NoiseParams", "inject_noise", "sweep",
    "StringOrderSpec", "occupancy", "post_select", "string_order_exact", "string_order_shots",
    "build_ansatz", "optimize", "recompile_trajectory",
    "ShotSet", "State", "sample",
]
