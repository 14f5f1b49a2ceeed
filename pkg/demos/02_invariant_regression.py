"""Learning a rotation-invariant function of three particles on the circle.

Three strategies are compared per polynomial degree: least squares over the
full tensor basis, least squares restricted to the invariant sub-basis, and
the full fit followed by coefficient-space symmetrization.  With uniform data
all three track the truncation error of the target; with particle 1 pinned to
zero the full basis cannot be identified at all.

Run from the repository root:  python3 demos/02_invariant_regression.py
"""
import numpy as np

from symquad import (DistributionSpec, ExponentialDecay, RegressionSolution,
                     enumerate_basis, full_lsq, invariant_lsq, l2_test_error,
                     make_target, sample_dataset, sym_coeffs)

rng = np.random.default_rng(1)

# target: random invariant trigonometric polynomial of degree 30 whose
# coefficients decay like e^{-2 ||k||_1} (an analytic function in disguise)
target = make_target(1, ExponentialDecay(2.0), 30, seed=7)
test = sample_dataset(DistributionSpec(1, "UUU"), 1000, rng, target)

for dist_name in ("UUU", "dUU"):
    dist = DistributionSpec(1, dist_name)
    train = sample_dataset(dist, 2000, rng, target)
    print(f"\ntraining distribution {dist_name} "
          f"({'uniform' if dist_name == 'UUU' else 'particle 1 pinned at 0'})")
    print(f"{'K':>2} {'full':>10} {'invariant':>10} {'projected':>10} {'tail':>10}")
    for k in range(1, 6):
        basis = enumerate_basis(1, 3, k)
        sol_full = full_lsq(basis, train)
        sol_inv = invariant_lsq(basis, train)
        projected = RegressionSolution(basis, sym_coeffs(sol_full.beta, basis),
                                       0.0, sol_full.train_residual)
        print(f"{k:>2} {l2_test_error(sol_full, target, test):>10.2e}"
              f" {l2_test_error(sol_inv, target, test):>10.2e}"
              f" {l2_test_error(projected, target, test):>10.2e}"
              f" {target.tail_norm(k):>10.2e}")

print("""
Reading the tables: under uniform sampling every column follows the analytic
truncation tail (spectral convergence).  Under the pinned distribution the
full-basis fit stalls: the data carry no information about how the function
varies with particle 1, while the invariant fit is unaffected.
""")
