"""
Recompiling the adiabatic path into shallow circuits
====================================================

Fit a 5-round brick-layer ansatz (30 native two-qubit gates on 7 sites)
to each Trotter state, warm-starting from the previous point.
"""

import logging

from sptsim.circuits import asp_circuit, simulate, zero_state
from sptsim.model import PRESETS
from sptsim.observables import StringOrderSpec, string_order_exact
from sptsim.recompile import OptimizeOptions, build_ansatz, recompile_trajectory, recompiled_state

logging.basicConfig(level=logging.INFO, format="%(message)s")

preset, L = PRESETS["ed"], 7
spec = build_ansatz(L, 5)
print("ansatz two-qubit gates:", spec.n_two_qubit, " parameters:", spec.n_params)

points = recompile_trajectory(preset, L, 5, OptimizeOptions(tolerance=1e-3))
o = StringOrderSpec(L, 1)
for m, pt in enumerate(points):
    trotter = abs(string_order_exact(simulate(asp_circuit(preset, L, m), zero_state(L)), o))
    fitted = abs(string_order_exact(recompiled_state(spec, pt.params), o))
    print(f"s={pt.s:.3f}  infidelity {pt.infidelity:.1e}  |O_z1| trotter {trotter:.4f}  recompiled {fitted:.4f}")
