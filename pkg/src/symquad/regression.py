"""Least-squares machinery: design matrices over a BasisSpec, plain /
invariant / augmented solves with an absolute SVD cutoff, symmetrization
error and Schur-complement diagnostics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coupling import BasisSpec, eval_coupled, sym_coeffs
from .geometry import SO2, SO3, Configuration, QuadratureRule, Rotation, sample_haar_many
from .harmonics import apply_generalized_d, rotation_blocks, sph_harm_table

_MACHINE_FLOOR = 1e-13
_COMPRESS_ROWS = 16384


@dataclass(frozen=True)
class Dataset:
    """Sampled configurations with (complex) target values.

    ``points`` is (n, N) angles for d=1 or (n, N, 3) unit vectors for d=2;
    ``values`` is None for unlabeled data (e.g. distribution previews).
    """

    d: int
    points: np.ndarray
    values: np.ndarray | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if self.d == 1 and pts.ndim != 2:
            raise ValueError("d=1 expects an (n, N) array of angles")
        if self.d == 2 and (pts.ndim != 3 or pts.shape[2] != 3):
            raise ValueError("d=2 expects an (n, N, 3) array of unit vectors")
        object.__setattr__(self, "points", pts)
        if self.values is not None:
            vals = np.asarray(self.values, dtype=complex)
            if vals.shape != (pts.shape[0],):
                raise ValueError("values length must match the number of configurations")
            object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def n_particles(self) -> int:
        return self.points.shape[1]

    @classmethod
    def from_configurations(cls, configs, values=None) -> "Dataset":
        d = configs[0].dim
        if any(c.dim != d or c.n_particles != configs[0].n_particles for c in configs):
            raise ValueError("all configurations must share (d, N)")
        return cls(d, np.stack([c.points for c in configs]), values)

    @property
    def configurations(self) -> list[Configuration]:
        return [Configuration(self.d, p) for p in self.points]


def rotate_dataset(q: Rotation, data: Dataset) -> Dataset:
    """Element-wise rotation of every configuration; values are untouched."""
    if data.d == 1:
        if q.group != SO2:
            raise ValueError("d=1 data needs an SO(2) rotation")
        return Dataset(1, np.mod(data.points + q.angle, 2.0 * np.pi), data.values)
    if q.group != SO3:
        raise ValueError("d=2 data needs an SO(3) rotation")
    return Dataset(2, data.points @ q.matrix.T, data.values)


# ---------------------------------------------------------------------------
# Design matrices
# ---------------------------------------------------------------------------

def _phase_tables(points: np.ndarray, degree: int) -> list[np.ndarray]:
    ks = np.arange(-degree, degree + 1)
    return [np.exp(1j * points[:, p, None] * ks[None, :]) for p in range(points.shape[1])]


def design_matrix(basis: BasisSpec, data: Dataset) -> np.ndarray:
    """n x p evaluations of the working basis functions, in basis order."""
    if data.d != basis.d or data.n_particles != basis.n_particles:
        raise ValueError("dataset and basis dimensions do not match")
    if basis.d == 1:
        tables = _phase_tables(data.points, basis.degree)
        karr = np.array(basis.indices, dtype=int)
        a = tables[0][:, karr[:, 0] + basis.degree].copy()
        for p in range(1, basis.n_particles):
            a *= tables[p][:, karr[:, p] + basis.degree]
        return a
    y_tables = [sph_harm_table(basis.degree, data.points[:, p, :])
                for p in range(basis.n_particles)]
    out = np.empty((data.n, basis.size), dtype=complex)
    for blk in basis.blocks:
        cols = np.ones((data.n, blk.dim), dtype=complex)
        for p, lp in enumerate(blk.l):
            ms = np.array([m[p] for (_, m) in basis.indices[blk.start:blk.stop]])
            cols *= y_tables[p][:, lp * lp + lp + ms]
        out[:, blk.work_cols] = cols @ blk.u
    return out


def invariant_design_matrix(basis: BasisSpec, data: Dataset) -> np.ndarray:
    """n x invariant_count evaluations of the invariant basis functions only."""
    if basis.d == 1:
        tables = _phase_tables(data.points, basis.degree)
        karr = np.array(basis.indices[:basis.invariant_count], dtype=int)
        a = tables[0][:, karr[:, 0] + basis.degree].copy()
        for p in range(1, basis.n_particles):
            a *= tables[p][:, karr[:, p] + basis.degree]
        return a
    y_tables = [sph_harm_table(basis.degree, data.points[:, p, :])
                for p in range(basis.n_particles)]
    return eval_coupled(list(basis.invariant_funcs), y_tables)


# ---------------------------------------------------------------------------
# Solvers
# ---------------------------------------------------------------------------

def lsq_solve(a: np.ndarray, y: np.ndarray, cutoff: float = 0.0,
              relative: bool = False) -> np.ndarray:
    """Minimum-norm least-squares solution via the SVD pseudo-inverse.

    Singular values below ``cutoff`` (an absolute threshold unless
    ``relative``) are discarded; cutoff 0 keeps everything above the machine
    floor 1e-13 * sigma_max.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] < 1:
        raise ValueError("empty least-squares system")
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros(a.shape[1], dtype=complex)
    if cutoff == 0.0:
        keep = s > _MACHINE_FLOOR * s[0]
    else:
        thr = cutoff * s[0] if relative else cutoff
        keep = s >= thr
    coeff = (u[:, keep].conj().T @ y) / s[keep]
    return vh[keep].conj().T @ coeff


@dataclass
class RegressionSolution:
    """Fitted coefficients in working order with attached diagnostics."""

    basis: BasisSpec
    beta: np.ndarray
    cutoff_used: float
    train_residual: float
    test_error: float | None = None
    schur_bound: float | None = None

    @property
    def beta_invariant(self) -> np.ndarray:
        return self.beta[:self.basis.invariant_count]

    @property
    def beta_noninvariant(self) -> np.ndarray:
        return self.beta[self.basis.invariant_count:]

    @property
    def eps_sym(self) -> float:
        return float(np.linalg.norm(self.beta_noninvariant))


def symmetrization_error(sol: RegressionSolution) -> float:
    """||beta - sym(beta)||_2, the coefficient distance to the invariant span."""
    return float(np.linalg.norm(sol.beta - sym_coeffs(sol.beta, sol.basis)))


def full_lsq(basis: BasisSpec, data: Dataset, cutoff: float = 0.0) -> RegressionSolution:
    """Plain least squares over the full working basis."""
    a = design_matrix(basis, data)
    beta = lsq_solve(a, data.values, cutoff)
    res = float(np.linalg.norm(a @ beta - data.values))
    return RegressionSolution(basis, beta, cutoff, res)


def invariant_lsq(basis: BasisSpec, data: Dataset, cutoff: float = 0.0) -> RegressionSolution:
    """Least squares restricted to the invariant columns; eps_sym is 0 by
    construction and the returned beta embeds the fit in the full basis."""
    if basis.invariant_count < 1:
        raise ValueError("basis has no invariant functions")
    a_inv = invariant_design_matrix(basis, data)
    beta_inv = lsq_solve(a_inv, data.values, cutoff)
    beta = np.zeros(basis.size, dtype=complex)
    beta[:basis.invariant_count] = beta_inv
    res = float(np.linalg.norm(a_inv @ beta_inv - data.values))
    return RegressionSolution(basis, beta, cutoff, res)


@dataclass(frozen=True)
class AugmentationScheme:
    """Rotation set used to augment the least-squares system.

    kind="quadrature" carries a QuadratureRule; kind="random" draws t iid
    Haar rotations (weights 1/t) from the given seed.
    """

    kind: str
    rule: QuadratureRule | None = None
    t: int | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.kind == "quadrature":
            if self.rule is None:
                raise ValueError("quadrature scheme needs a rule")
        elif self.kind == "random":
            if self.t is None or self.t < 1:
                raise ValueError("random scheme needs t >= 1")
            if self.seed is None:
                raise ValueError("random scheme needs a seed")
        else:
            raise ValueError(f"unknown augmentation kind {self.kind!r}")

    def nodes(self, d: int) -> tuple[np.ndarray, list[Rotation]]:
        """(weights, rotations) for data on S^d; deterministic given the seed."""
        group = SO2 if d == 1 else SO3
        if self.kind == "quadrature":
            if self.rule.group != group:
                raise ValueError(f"{self.rule.group} rule cannot augment d={d} data")
            return self.rule.weights, self.rule.rotations
        rots = sample_haar_many(group, self.t, np.random.default_rng(self.seed))
        return np.full(self.t, 1.0 / self.t), rots


def _compressed_stack(blocks, width: int, chunk_rows: int = _COMPRESS_ROWS) -> np.ndarray:
    """QR-compress vertically stacked blocks to an upper-triangular factor.

    Orthogonal reductions preserve singular values and least-squares
    solutions, so solving on the compressed factor is exact.
    """
    r = None
    buf, buffered = [], 0
    for block in blocks:
        buf.append(block)
        buffered += block.shape[0]
        if buffered >= chunk_rows:
            stacked = np.concatenate(([r] if r is not None else []) + buf, axis=0)
            r = np.linalg.qr(stacked, mode="r")
            buf, buffered = [], 0
    stacked = np.concatenate(([r] if r is not None else []) + buf, axis=0) if buf else r
    if stacked is None:
        raise ValueError("no augmentation blocks")
    if stacked.shape[0] > width:
        stacked = np.linalg.qr(stacked, mode="r")
    return stacked


def augmented_lsq(basis: BasisSpec, data: Dataset, scheme: AugmentationScheme,
                  cutoff: float = 0.0) -> RegressionSolution:
    """Symmetry-augmented least squares.

    Minimizes (1/2) sum_t w_t ||A D(Q_t) beta - Y||^2 by row-stacking the
    sqrt(w_t)-scaled rotated design blocks; the data vector is replicated,
    never rotated.  Large stacks are QR-compressed chunk by chunk, which
    leaves the solution bit-for-bit identical to the plain stacked solve up
    to the orthogonal reduction.
    """
    weights, rotations = scheme.nodes(basis.d)
    a = design_matrix(basis, data)
    y = data.values
    p = basis.size

    def blocks():
        for w, q in zip(weights, rotations):
            sw = np.sqrt(w)
            yield np.concatenate([sw * apply_generalized_d(basis, a, q),
                                  (sw * y)[:, None]], axis=1)

    total_rows = data.n * len(weights)
    if total_rows <= _COMPRESS_ROWS:
        stacked = np.concatenate(list(blocks()), axis=0)
    else:
        stacked = _compressed_stack(blocks(), p + 1)
    beta = lsq_solve(stacked[:, :p], stacked[:, p], cutoff)
    res = float(np.linalg.norm(stacked[:, :p] @ beta - stacked[:, p]))
    return RegressionSolution(basis, beta, cutoff, res)


def l2_test_error(sol: RegressionSolution, target, test_data: Dataset) -> float:
    """Root-mean-square of |P_beta(R_i) - f(R_i)| over the test set.

    Truth values come from ``test_data.values`` when present, otherwise from
    calling ``target`` on the test points.
    """
    if test_data.n < 1:
        raise ValueError("empty test set")
    pred = design_matrix(sol.basis, test_data) @ sol.beta
    truth = test_data.values if test_data.values is not None else target(test_data)
    return float(np.sqrt(np.mean(np.abs(pred - truth) ** 2)))


# ---------------------------------------------------------------------------
# Schur-complement diagnostics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SchurDiagnostics:
    """Upper bound (1/c2) ||A_N Dbar|| ||A_I beta_I - Y|| on eps_sym."""

    available: bool
    bound: float | None
    d_bar_norm: float | None
    invariant_residual: float | None
    c2: float | None


def _noninvariant_rotation(basis: BasisSpec, q: Rotation) -> np.ndarray:
    """Dense lower-right (non-invariant) block of D(Q) in working order."""
    n_inv = basis.invariant_count
    p_n = basis.size - n_inv
    blocks = rotation_blocks(basis, q)
    if basis.d == 1:
        return np.diag(blocks[n_inv:])
    out = np.zeros((p_n, p_n), dtype=complex)
    for blk, mat in zip(basis.blocks, blocks):
        cols = blk.work_cols[blk.n_inv:] - n_inv
        out[np.ix_(cols, cols)] = mat[blk.n_inv:, blk.n_inv:]
    return out


def schur_diagnostics(basis: BasisSpec, data: Dataset, scheme: AugmentationScheme,
                      sol: RegressionSolution) -> SchurDiagnostics:
    """Schur-complement bound for the augmented solve that produced ``sol``.

    Builds the averaged non-invariant rotation block Dbar = sum_t w_t D_{t,N},
    the Schur complement S = D - C* B^{-1} C of the augmented normal matrix,
    and the bound eps_sym <= ||A_N Dbar||_op ||A_I beta_I - Y|| / sigma_min(S).
    Rank-deficient systems yield an unavailable diagnostic instead of a crash.
    """
    weights, rotations = scheme.nodes(basis.d)
    a = design_matrix(basis, data)
    n_inv = basis.invariant_count
    a_i, a_n = a[:, :n_inv], a[:, n_inv:]
    p_n = basis.size - n_inv

    if basis.d == 1:
        phases = np.stack([rotation_blocks(basis, q)[n_inv:] for q in rotations])
        d_bar = np.diag(phases.T @ weights.astype(complex))
        gram_n = a_n.conj().T @ a_n
        d_block = gram_n * (phases.conj().T @ (weights[:, None] * phases))
    else:
        d_bar = np.zeros((p_n, p_n), dtype=complex)
        d_block = np.zeros((p_n, p_n), dtype=complex)
        gram_n = a_n.conj().T @ a_n
        for w, q in zip(weights, rotations):
            d_t = _noninvariant_rotation(basis, q)
            d_bar += w * d_t
            d_block += w * (d_t.conj().T @ (gram_n @ d_t))

    b_block = a_i.conj().T @ a_i
    c_block = a_i.conj().T @ a_n @ d_bar

    normal = np.block([[b_block, c_block], [c_block.conj().T, d_block]])
    sigma_min_sq = float(np.linalg.eigvalsh(normal)[0])
    if sigma_min_sq <= (1e-10) ** 2:
        return SchurDiagnostics(False, None, None, None, None)

    schur = d_block - c_block.conj().T @ np.linalg.solve(b_block, c_block)
    eigs = np.linalg.eigvalsh(schur)
    c2 = float(eigs[0])
    # exact arithmetic gives a positive definite Schur complement; a tiny or
    # negative bottom eigenvalue means B^{-1} amplified roundoff past meaning
    if c2 <= 1e-12 * max(float(eigs[-1]), 1e-300):
        return SchurDiagnostics(False, None, None, None, None)
    beta_i = invariant_lsq(basis, data, cutoff=0.0).beta_invariant
    inv_residual = float(np.linalg.norm(a_i @ beta_i - data.values))
    d_bar_norm = float(np.linalg.norm(a_n @ d_bar, ord=2))
    bound = d_bar_norm * inv_residual / c2
    return SchurDiagnostics(True, bound, d_bar_norm, inv_residual, c2)
