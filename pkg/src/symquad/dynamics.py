"""Symplectic simulation of particles on the circle under approximately
rotation-invariant potentials, with total angular momentum and energy
tracking."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import TWO_PI


@dataclass(frozen=True)
class PhaseState:
    """Canonical coordinates of N unit-mass particles on the circle."""

    theta: np.ndarray
    p: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        th = np.asarray(self.theta, dtype=float)
        mo = np.asarray(self.p, dtype=float)
        if th.shape != mo.shape or th.ndim != 1:
            raise ValueError("theta and p must be 1-d arrays of equal length")
        if not (np.isfinite(th).all() and np.isfinite(mo).all()):
            raise ValueError("phase-space entries must be finite")
        object.__setattr__(self, "theta", th)
        object.__setattr__(self, "p", mo)

    @property
    def angular_momentum(self) -> float:
        return float(self.p.sum())


@dataclass(frozen=True)
class PerturbedPotential:
    """U = F + eps * G with F rotation-invariant.

    The four callables evaluate values and analytic gradients and must accept
    batched angle arrays of shape (..., N).  Invariance of F under the
    simultaneous shift theta -> theta + alpha is spot-checked at construction.
    """

    invariant_value: object
    invariant_grad: object
    perturbation_value: object
    perturbation_grad: object
    epsilon: float
    n_particles: int = 3

    def __post_init__(self):
        if self.epsilon < 0.0:
            raise ValueError("epsilon must be >= 0")
        rng = np.random.default_rng(0x5EED)
        theta = rng.uniform(0.0, TWO_PI, (8, self.n_particles))
        alpha = rng.uniform(0.0, TWO_PI, (8, 1))
        base = np.asarray(self.invariant_value(theta), dtype=float)
        shifted = np.asarray(self.invariant_value(theta + alpha), dtype=float)
        if np.abs(base - shifted).max() > 1e-12:
            raise ValueError("invariant part is not rotation-invariant within 1e-12")

    def energy(self, theta: np.ndarray) -> np.ndarray:
        return (np.asarray(self.invariant_value(theta))
                + self.epsilon * np.asarray(self.perturbation_value(theta)))

    def gradient(self, theta: np.ndarray) -> np.ndarray:
        return (np.asarray(self.invariant_grad(theta))
                + self.epsilon * np.asarray(self.perturbation_grad(theta)))


def _pair_cosine_value(theta):
    diffs = theta[..., :, None] - theta[..., None, :]
    return 0.5 * (np.cos(diffs).sum(axis=(-2, -1)) - theta.shape[-1])


def _pair_cosine_grad(theta):
    diffs = theta[..., :, None] - theta[..., None, :]
    return -np.sin(diffs).sum(axis=-1)


def _wobble_value(theta):
    return (np.sin(2.0 * theta) + 0.5 * np.cos(theta)).sum(axis=-1)


def _wobble_grad(theta):
    return 2.0 * np.cos(2.0 * theta) - 0.5 * np.sin(theta)


def default_potential(epsilon: float, n_particles: int = 3) -> PerturbedPotential:
    """Pairwise-cosine invariant part plus a non-invariant single-particle
    wobble: F = sum_{i<j} cos(theta_i - theta_j), G = sum_i sin(2 theta_i)
    + cos(theta_i)/2."""
    return PerturbedPotential(_pair_cosine_value, _pair_cosine_grad,
                              _wobble_value, _wobble_grad, epsilon, n_particles)


def force(pot: PerturbedPotential, theta: np.ndarray) -> np.ndarray:
    """-grad U, evaluated analytically; accepts batched (..., N) angles."""
    return -pot.gradient(np.asarray(theta, dtype=float))


def verlet_step(state: PhaseState, pot: PerturbedPotential, dt: float) -> PhaseState:
    """One kick-drift-kick Velocity Verlet update."""
    if dt <= 0.0:
        raise ValueError("dt must be > 0")
    p_half = state.p + 0.5 * dt * force(pot, state.theta)
    theta = state.theta + dt * p_half
    p = p_half + 0.5 * dt * force(pot, theta)
    return PhaseState(theta, p, state.time + dt)


@dataclass(frozen=True)
class Trajectory:
    """Recorded observables of one run; arrays share one entry per record."""

    steps: np.ndarray
    times: np.ndarray
    angular_momentum: np.ndarray
    energy: np.ndarray
    aborted: bool = False

    def __len__(self) -> int:
        return self.steps.size


def simulate(pot: PerturbedPotential, init: PhaseState, dt: float, n_steps: int,
             record_every: int = 1) -> Trajectory:
    """Integrate and record (step, t, J, H) every ``record_every`` steps.

    A non-finite state aborts the run; the trajectory then ends at the last
    valid record.
    """
    if n_steps < 1 or record_every < 1:
        raise ValueError("need n_steps >= 1 and record_every >= 1")
    theta = init.theta.copy()
    p = init.p.copy()
    half_dt = 0.5 * dt

    n_rec = n_steps // record_every + 1
    steps = np.zeros(n_rec, dtype=np.int64)
    times = np.zeros(n_rec)
    j_series = np.zeros(n_rec)
    h_series = np.zeros(n_rec)
    steps[0] = 0
    times[0] = init.time
    j_series[0] = p.sum()
    h_series[0] = 0.5 * (p @ p) + float(pot.energy(theta))

    f = force(pot, theta)
    k = 1
    aborted = False
    for step in range(1, n_steps + 1):
        p += half_dt * f
        theta += dt * p
        f = force(pot, theta)
        p += half_dt * f
        if step % record_every == 0:
            if not (np.isfinite(theta).all() and np.isfinite(p).all()):
                aborted = True
                break
            steps[k] = step
            times[k] = init.time + step * dt
            j_series[k] = p.sum()
            h_series[k] = 0.5 * (p @ p) + float(pot.energy(theta))
            k += 1
    return Trajectory(steps[:k], times[:k], j_series[:k], h_series[:k], aborted)


def simulate_batch(pot: PerturbedPotential, thetas: np.ndarray, ps: np.ndarray,
                   dt: float, n_steps: int, record_every: int = 1) -> Trajectory:
    """Integrate B independent runs in lockstep; recorded arrays get a
    leading batch axis.  Used by the drift sweeps."""
    theta = np.array(thetas, dtype=float)
    p = np.array(ps, dtype=float)
    half_dt = 0.5 * dt
    n_rec = n_steps // record_every + 1
    b = theta.shape[0]
    steps = np.zeros(n_rec, dtype=np.int64)
    times = np.zeros(n_rec)
    j_series = np.zeros((b, n_rec))
    h_series = np.zeros((b, n_rec))
    j_series[:, 0] = p.sum(axis=1)
    h_series[:, 0] = 0.5 * (p * p).sum(axis=1) + pot.energy(theta)

    f = force(pot, theta)
    k = 1
    aborted = False
    for step in range(1, n_steps + 1):
        p += half_dt * f
        theta += dt * p
        f = force(pot, theta)
        p += half_dt * f
        if step % record_every == 0:
            if not np.isfinite(theta).all():
                aborted = True
                break
            steps[k] = step
            times[k] = step * dt
            j_series[:, k] = p.sum(axis=1)
            h_series[:, k] = 0.5 * (p * p).sum(axis=1) + pot.energy(theta)
            k += 1
    return Trajectory(steps[:k], times[:k], j_series[:, :k], h_series[:, :k], aborted)


def hitting_time(j_series: np.ndarray, eps_target: float) -> int | None:
    """Index of the first recorded entry with |J| >= eps_target, else None."""
    j_series = np.asarray(j_series)
    if j_series.size == 0:
        raise ValueError("empty series")
    hits = np.flatnonzero(np.abs(j_series) >= eps_target)
    return int(hits[0]) if hits.size else None


def write_trajectory_csv(traj: Trajectory, path) -> None:
    """Columns step,time,J,H, one row per record."""
    if traj.angular_momentum.ndim != 1:
        raise ValueError("write_trajectory_csv expects a single-run trajectory")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("step,time,J,H\n")
        for s, t, j, h in zip(traj.steps, traj.times, traj.angular_momentum, traj.energy):
            fh.write(f"{s},{float(t)!r},{float(j)!r},{float(h)!r}\n")
