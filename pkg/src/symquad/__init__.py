"""symquad: learning rotation-invariant functions of particle configurations
on S^1 and S^2 by polynomial least squares, with invariant bases and
Haar-measure data augmentation, plus a symplectic drift testbed."""

from .coupling import (BasisSpec, CoupledFunction, clebsch_gordan, enumerate_basis,
                       invariant_basis_sphere3, invariant_indices_circle, sym_coeffs)
from .dynamics import (PerturbedPotential, PhaseState, Trajectory, default_potential,
                       force, hitting_time, simulate, simulate_batch, verlet_step,
                       write_trajectory_csv)
from .experiments import (ConfigError, ExperimentConfig, ResultTable, emit_plot,
                          list_experiments, load_configs, run_config_file, run_experiment)
from .geometry import (SO2, SO3, Configuration, QuadratureRule, Rotation, compose,
                       identity_rule, load_quadrature_file, rotate_config, sample_haar,
                       sample_haar_many, so2_quadrature, so3_quadrature_euler,
                       verify_exactness, write_quadrature_file)
from .harmonics import (SphericalIndex, WignerBlock, apply_generalized_d, eval_fourier,
                        eval_sph_harm, generalized_d, sph_harm_table, wigner_d,
                        wigner_little_d)
from .regression import (AugmentationScheme, Dataset, RegressionSolution,
                         SchurDiagnostics, augmented_lsq, design_matrix, full_lsq,
                         invariant_design_matrix, invariant_lsq, l2_test_error,
                         lsq_solve, rotate_dataset, schur_diagnostics,
                         symmetrization_error)
from .sampling import (AlgebraicDecay, DistributionSpec, ExponentialDecay,
                       TargetFunction, eval_target, export_dataset, import_dataset,
                       make_target, sample_config, sample_dataset, sample_points)

__version__ = "0.1.0"
