"""
Two ways to fight the parasitic controlled phase
================================================

A: follow each native gate with a CPhase(-phi) made of two more natives.
B: put Rz(-phi/2) on both qubits before each native gate.
"""

import numpy as np

from sptsim.circuits import SQRT_ISWAP_DAGGER, asp_circuit, decompose_to_native
from sptsim.model import PRESETS
from sptsim.noise import NoiseParams, compensate_cphase, noisy_native_gate, noisy_trajectory, split_phase_matrix

preset, phi = PRESETS["ed-supplement"], 0.2
noise = NoiseParams(phi=phi)

native = decompose_to_native(asp_circuit(preset, 7, 12))
print("two-qubit gates:", native.two_qubit_count(), "->", compensate_cphase(native, phi).two_qubit_count())

# B at the matrix level: the |11> corner is fixed, the single-excitation block picks up a phase
u = noisy_native_gate(noise) @ split_phase_matrix(phi)
np.set_printoptions(precision=3, suppress=True)
print("split gate / ideal, diagonal:", np.diag(u / u[0, 0]) / np.diag(SQRT_ISWAP_DAGGER))

for mitigation in ("none", "cphase", "zsplit"):
    traj = noisy_trajectory(preset, 7, noise, mitigation)
    print(f"{mitigation:>7}:", " ".join(f"{o:.3f}" for _, o in traj))

# without post-selection the leaky compensation circuits look worse still
traj = noisy_trajectory(preset, 7, noise, "cphase", postselect=False)
print("cphase, no post-selection: final", round(traj[-1][1], 3))
