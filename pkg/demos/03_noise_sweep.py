"""
Coherent errors on the native gate
==================================

Sweep each parameter of the number-conserving gate model one at a time
(the others stay ideal) and compare final |O_z1| on 7 sites. Sweep values
are arbitrary representative choices.
"""

from sptsim.model import PRESETS
from sptsim.noise import NoiseParams, max_final_deviation, noisy_trajectory, sweep

preset = PRESETS["ed-supplement"]
values = [0.0, 0.05, 0.1, 0.2]
ideal = noisy_trajectory(preset, 7)[-1][1]
print("ideal final |O_z1| =", round(ideal, 4))

for param in ("phi", "gamma", "zeta", "chi"):
    rows = sweep(param, values, preset, 7)
    finals = [r.abs_oz1 for r in rows if r.s == 1.0]
    print(f"{param:>5}: finals {[round(f, 3) for f in finals]}   max deviation {max_final_deviation(rows, ideal):.4f}")

# full trajectory at phi = 0.2
for param in ("phi", "chi"):
    traj = noisy_trajectory(preset, 7, NoiseParams(**{param: 0.2}))
    print(param, "= 0.2:", " ".join(f"{o:.3f}" for _, o in traj))
