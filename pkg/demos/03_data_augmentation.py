"""Quadrature vs random Haar data augmentation.

Augmenting the least-squares system with rotated copies of the data pushes
the fitted coefficients toward the invariant subspace.  With rotations drawn
at random the symmetrization error decays like T^{-1/2}; with a quadrature
rule of degree >= the model degree it vanishes outright.

Run from the repository root:  python3 demos/03_data_augmentation.py
Writes demo_output/augmentation.svg.
"""
import os

import numpy as np

from symquad import (AugmentationScheme, DistributionSpec, ExponentialDecay, ResultTable,
                     augmented_lsq, emit_plot, enumerate_basis, make_target,
                     sample_dataset, schur_diagnostics, so2_quadrature)

K = 4
basis = enumerate_basis(1, 3, K)
target = make_target(1, ExponentialDecay(2.0), 30, seed=3)
train = sample_dataset(DistributionSpec(1, "dUU"), 100, np.random.default_rng(4), target)

table = ResultTable("compare", "augmentation-demo", {"seed": 4})

print(f"model degree K={K}, 100 training points, particle 1 pinned at 0")
print(f"{'rotations':>9} {'random eps_sym':>15} {'quad eps_sym':>13}")
for q_deg in range(0, 7):
    rule = so2_quadrature(q_deg + 1)
    budget = len(rule)
    sol_q = augmented_lsq(basis, train, AugmentationScheme("quadrature", rule=rule))
    eps_r = []
    for trial in range(8):
        scheme = AugmentationScheme("random", t=budget, seed=100 * q_deg + trial)
        eps_r.append(augmented_lsq(basis, train, scheme).eps_sym)
    print(f"{budget:>9} {np.mean(eps_r):>15.3e} {sol_q.eps_sym:>13.3e}")
    table.add(budget, "random_eps_sym", eps_r)
    table.add(budget, "quad_eps_sym", [sol_q.eps_sym])

os.makedirs("demo_output", exist_ok=True)
path = emit_plot(table, "loglog", os.path.join("demo_output", "augmentation.svg"))
print(f"\nwrote {path}")

# On well-conditioned (uniform) data the Schur-complement machinery also
# yields a computable a-priori bound on the measured error.
uuu = sample_dataset(DistributionSpec(1, "UUU"), 100, np.random.default_rng(5), target)
print(f"\nuniform data, random augmentation: {'T':>4} {'eps_sym':>10} {'bound':>10}")
for t in (16, 64, 256):
    scheme = AugmentationScheme("random", t=t, seed=t)
    sol = augmented_lsq(basis, uuu, scheme)
    diag = schur_diagnostics(basis, uuu, scheme, sol)
    print(f"{'':>35}{t:>4} {sol.eps_sym:>10.2e} {diag.bound:>10.2e}")

print("""
The quadrature column collapses to machine precision as soon as the rule's
degree reaches the model degree (here: 5 nodes), while the random column only
shrinks like one over the square root of the rotation budget, with the Schur
bound tracking it from above.
""")
