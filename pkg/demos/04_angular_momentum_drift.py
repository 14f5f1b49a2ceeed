"""Why exact symmetry matters downstream: angular-momentum drift.

Three particles on the circle evolve under U = F + eps*G where F is
rotation-invariant and G deliberately is not.  A Velocity Verlet integrator
conserves the total angular momentum J = sum(p) essentially to roundoff when
eps = 0; any eps > 0 makes J wander away, and the stronger the perturbation
the sooner it crosses a given error target.

Run from the repository root:  python3 demos/04_angular_momentum_drift.py
Writes demo_output/drift_eps*.csv.
"""
import os

import numpy as np

from symquad import (PhaseState, default_potential, hitting_time, simulate,
                     write_trajectory_csv)

dt = 0.05
steps = 200_000
init = PhaseState(np.array([0.1, 2.2, 4.0]), np.array([0.3, -0.1, -0.2]))
print(f"initial total angular momentum: {init.angular_momentum:+.1e} (vanishes)")

os.makedirs("demo_output", exist_ok=True)
print(f"\n{'eps':>8} {'max|J|':>10} {'max|dH|':>10} " +
      " ".join(f"hit(1e-{k})" for k in (4, 3, 2)))
for eps in (0.0, 1e-3, 1e-2, 1e-1):
    traj = simulate(default_potential(eps), init, dt, steps, record_every=20)
    write_trajectory_csv(traj, os.path.join("demo_output", f"drift_eps{eps:g}.csv"))
    hits = []
    for target in (1e-4, 1e-3, 1e-2):
        idx = hitting_time(traj.angular_momentum, target)
        hits.append("never" if idx is None else str(int(traj.steps[idx])))
    dh = np.abs(traj.energy - traj.energy[0]).max()
    print(f"{eps:>8g} {np.abs(traj.angular_momentum).max():>10.2e} {dh:>10.2e} "
          + " ".join(f"{h:>9}" for h in hits))

print("""
At eps = 0 the momentum stays below 1e-13 for two hundred thousand steps; the
energy merely oscillates (the shadow-Hamiltonian picture).  Any symmetry
error in the potential shows up as a secular drift of J, which is why the
regression side of this package cares about symmetrizing exactly rather than
approximately.
""")
