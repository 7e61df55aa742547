"""
Trotterized adiabatic preparation
=================================

Start in the Neel state, run 12 first-order Trotter steps of
H(s) = (1 - s) H_I + s H_T and follow |O_z1| along the way, both exactly
and from sampled, post-selected bitstrings.
"""

import numpy as np

from sptsim.circuits import asp_circuit, decompose_to_native, simulate, zero_state
from sptsim.model import PRESETS, neel_sector, target_ground_state
from sptsim.observables import StringOrderSpec, aggregate, post_select, string_order_exact, string_order_shots
from sptsim.statevector import sample

preset, L = PRESETS["ed"], 7
spec = StringOrderSpec(L, 1)

print(" s      exact   shots (mean +/- std over 10 seeds)")
for m in range(13):
    state = simulate(asp_circuit(preset, L, m), zero_state(L))
    runs = []
    for seed in range(10):
        shots = post_select(sample(state, 8192, seed), neel_sector(L))
        runs.append(abs(string_order_shots(shots, spec)))
    agg = aggregate(runs)
    print(f"{m / 12:.3f}  {abs(string_order_exact(state, spec)):.4f}   {agg.mean:.4f} +/- {agg.stddev:.4f}")

gs = target_ground_state(preset.params, L)[1]
print("exact ground state |O_z1| =", round(abs(string_order_exact(gs, spec)), 4))

# fidelity with the true ground state at the end of the path
final = simulate(asp_circuit(preset, L, 12), zero_state(L))
print("final fidelity", abs(np.vdot(gs.amplitudes, final.amplitudes)) ** 2)

# the hardware circuit: two native gates per hopping
native = decompose_to_native(asp_circuit(preset, L, 12))
print("native two-qubit gates:", native.two_qubit_count())
