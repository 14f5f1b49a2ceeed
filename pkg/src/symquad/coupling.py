"""Tensor-product bases on N-fold sphere products, their rotation-invariant
sub-bases (zero index sum on the circle, Clebsch-Gordan couplings on S^2) and
the coefficient-space symmetrization projector."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

_RANK_TOL = 1e-10


def _lfact(n: int) -> float:
    return math.lgamma(n + 1)


def clebsch_gordan(l1: int, m1: int, l2: int, m2: int, l3: int, m3: int) -> float:
    """Clebsch-Gordan coefficient <l1 m1; l2 m2 | l3 m3>.

    Real Condon-Shortley convention, computed by the Racah finite sum with
    log-factorials.  Violated selection rules (m1+m2 != m3 or triangle
    failure) give 0; |m| > l is rejected.
    """
    for l, m in ((l1, m1), (l2, m2), (l3, m3)):
        if l < 0 or abs(m) > l:
            raise ValueError(f"invalid quantum numbers l={l}, m={m}")
    if m1 + m2 != m3:
        return 0.0
    if l3 < abs(l1 - l2) or l3 > l1 + l2:
        return 0.0
    pref = 0.5 * (
        math.log(2 * l3 + 1)
        + _lfact(l1 + l2 - l3) + _lfact(l1 - l2 + l3) + _lfact(-l1 + l2 + l3)
        - _lfact(l1 + l2 + l3 + 1)
        + _lfact(l1 + m1) + _lfact(l1 - m1)
        + _lfact(l2 + m2) + _lfact(l2 - m2)
        + _lfact(l3 + m3) + _lfact(l3 - m3)
    )
    kmin = max(0, l2 - l3 - m1, l1 - l3 + m2)
    kmax = min(l1 + l2 - l3, l1 - m1, l2 + m2)
    total = 0.0
    for k in range(kmin, kmax + 1):
        den = (_lfact(k) + _lfact(l1 + l2 - l3 - k) + _lfact(l1 - m1 - k)
               + _lfact(l2 + m2 - k) + _lfact(l3 - l2 + m1 + k) + _lfact(l3 - l1 - m2 + k))
        total += (-1) ** k * math.exp(pref - den)
    return total


# ---------------------------------------------------------------------------
# Multi-index enumeration
# ---------------------------------------------------------------------------

def invariant_indices_circle(n_particles: int, degree: int) -> list[tuple[int, ...]]:
    """All k in Z^N with ||k||_1 <= degree and sum(k) = 0, in lexicographic order."""
    if n_particles < 1 or degree < 0:
        raise ValueError("need n_particles >= 1 and degree >= 0")
    out = []
    if n_particles == 1:
        return [(0,)]
    span = range(-degree, degree + 1)
    for head in itertools.product(span, repeat=n_particles - 1):
        last = -sum(head)
        k = head + (last,)
        if sum(abs(c) for c in k) <= degree:
            out.append(k)
    return out


def _circle_indices(n_particles: int, degree: int) -> list[tuple[int, ...]]:
    span = range(-degree, degree + 1)
    return [k for k in itertools.product(span, repeat=n_particles)
            if sum(abs(c) for c in k) <= degree]


def _l_tuples(n_particles: int, degree: int) -> list[tuple[int, ...]]:
    return [l for l in itertools.product(range(degree + 1), repeat=n_particles)
            if sum(l) <= degree]


def _m_tuples(l: tuple[int, ...]) -> list[tuple[int, ...]]:
    return list(itertools.product(*(range(-li, li + 1) for li in l)))


# ---------------------------------------------------------------------------
# Invariant couplings on S^2
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoupledFunction:
    """One rotation-invariant combination within a fixed l-tuple block.

    ``ms`` holds the m-tuples carrying nonzero coefficients and ``coeffs``
    the matching real coefficients; the coefficient vector has unit 2-norm.
    """

    l: tuple[int, ...]
    ms: np.ndarray
    coeffs: np.ndarray


def _coupled_pair(l: int) -> CoupledFunction:
    ms, cs = [], []
    for m in range(-l, l + 1):
        ms.append((m, -m))
        cs.append(clebsch_gordan(l, m, l, -m, 0, 0))
    return CoupledFunction((l, l), np.array(ms, dtype=int), np.array(cs))


def _coupled_triple(l1: int, l2: int, l3: int) -> CoupledFunction:
    # Couple l1 x l2 to l3, then contract with the third particle's l3 copy to
    # the rotation-invariant (total angular momentum zero) combination.
    ms, cs = [], []
    for m1 in range(-l1, l1 + 1):
        for m2 in range(-l2, l2 + 1):
            m3 = -(m1 + m2)
            if abs(m3) > l3:
                continue
            c = (clebsch_gordan(l1, m1, l2, m2, l3, -m3)
                 * clebsch_gordan(l3, -m3, l3, m3, 0, 0))
            if c != 0.0:
                ms.append((m1, m2, m3))
                cs.append(c)
    return CoupledFunction((l1, l2, l3), np.array(ms, dtype=int), np.array(cs))


def invariant_couplings(n_particles: int, degree: int) -> list[CoupledFunction]:
    """Invariant basis combinations for N in {1, 2, 3} up to total degree K.

    One combination per admissible l-tuple: l = (0,...,0), equal pairs, and
    triangle-admissible triples |l1-l2| <= l3 <= l1+l2.
    """
    if degree < 0:
        raise ValueError("degree must be >= 0")
    out = []
    if n_particles == 1:
        out.append(CoupledFunction((0,), np.zeros((1, 1), dtype=int), np.ones(1)))
    elif n_particles == 2:
        for l in range(degree // 2 + 1):
            out.append(_coupled_pair(l))
    elif n_particles == 3:
        for l in _l_tuples(3, degree):
            if abs(l[0] - l[1]) <= l[2] <= l[0] + l[1]:
                out.append(_coupled_triple(*l))
    else:
        raise ValueError("invariant couplings are implemented for N <= 3")
    return out


def invariant_basis_sphere3(degree: int) -> list[CoupledFunction]:
    """Orthonormal invariant basis of the three-particle S^2 space of total
    degree <= K, one coupled function per triangle-admissible l-triple."""
    return invariant_couplings(3, degree)


def eval_coupled(funcs: list[CoupledFunction], y_tables: list[np.ndarray]) -> np.ndarray:
    """Evaluate coupled functions given per-particle spherical-harmonic tables.

    ``y_tables[p]`` has shape (n, (lmax+1)^2) indexed by l*l + l + m; returns
    an (n, len(funcs)) complex matrix.
    """
    n = y_tables[0].shape[0]
    out = np.empty((n, len(funcs)), dtype=complex)
    for j, f in enumerate(funcs):
        cols = np.ones((n, len(f.coeffs)), dtype=complex)
        for p, lp in enumerate(f.l):
            cols *= y_tables[p][:, lp * lp + lp + f.ms[:, p]]
        out[:, j] = cols @ f.coeffs
    return out


# ---------------------------------------------------------------------------
# BasisSpec
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Block:
    """Contiguous tensor-index range sharing one l-tuple (d=2)."""

    l: tuple[int, ...]
    start: int
    stop: int
    u: np.ndarray          # (dim, dim) unitary; first n_inv columns invariant
    n_inv: int
    work_cols: np.ndarray  # working column of each local basis function

    @property
    def dim(self) -> int:
        return self.stop - self.start


@dataclass(frozen=True)
class BasisSpec:
    """Ordered tensor basis of total degree <= K with its invariant sub-basis.

    Coefficient vectors used throughout the package live in the *working*
    order: the ``invariant_count`` orthonormal invariant functions first, the
    orthonormal complement after.  For d=1 the tensor functions themselves
    are listed invariant-first and the working basis coincides with them; for
    d=2 the working basis is the tensor basis recombined blockwise by the
    unitary ``coupling`` columns and their completions.
    """

    d: int
    n_particles: int
    degree: int
    indices: tuple
    invariant_count: int
    coupling: np.ndarray = field(repr=False)
    sums: np.ndarray | None = field(default=None, repr=False)      # d=1: sum(k) per index
    blocks: tuple = field(default=(), repr=False)                  # d=2
    invariant_funcs: tuple = field(default=(), repr=False)         # d=2 CoupledFunction

    @property
    def size(self) -> int:
        return len(self.indices)

    # -- coefficient transforms ----------------------------------------
    def to_working_matrix(self, a_tensor: np.ndarray) -> np.ndarray:
        """Recombine tensor-basis column evaluations into the working order."""
        if self.d == 1:
            return a_tensor
        out = np.empty_like(a_tensor)
        for b in self.blocks:
            out[:, b.work_cols] = a_tensor[:, b.start:b.stop] @ b.u
        return out

    def to_tensor_coeffs(self, beta: np.ndarray) -> np.ndarray:
        """Expand a working coefficient vector over the raw tensor functions."""
        if self.d == 1:
            return np.asarray(beta)
        out = np.empty_like(beta)
        for b in self.blocks:
            out[b.start:b.stop] = b.u @ beta[b.work_cols]
        return out

    def from_tensor_coeffs(self, beta_tensor: np.ndarray) -> np.ndarray:
        if self.d == 1:
            return np.asarray(beta_tensor)
        out = np.empty_like(beta_tensor)
        for b in self.blocks:
            out[b.work_cols] = b.u.conj().T @ beta_tensor[b.start:b.stop]
        return out

    @property
    def invariant_keys(self) -> tuple:
        """Multi-index labels of the invariant basis functions, in order."""
        if self.d == 1:
            return self.indices[:self.invariant_count]
        return tuple(f.l for f in self.invariant_funcs)


def _gram_schmidt_check(columns: np.ndarray) -> np.ndarray:
    """Modified Gram-Schmidt pass; drops directions below the rank tolerance."""
    kept = []
    for j in range(columns.shape[1]):
        v = columns[:, j].copy()
        for u in kept:
            v -= u * (u.conj() @ v)
        nrm = np.linalg.norm(v)
        if nrm > _RANK_TOL:
            kept.append(v / nrm)
    return np.stack(kept, axis=1) if kept else np.zeros((columns.shape[0], 0), dtype=complex)


def enumerate_basis(d: int, n_particles: int, degree: int) -> BasisSpec:
    """Deterministic enumeration of the degree-K tensor basis plus its
    orthonormal invariant sub-basis.

    d=1 lists every k with ||k||_1 <= K, the sum(k) = 0 elements first (each
    is itself invariant).  d=2 lists (l, m) pairs grouped by l-tuple in
    lexicographic order and attaches the Clebsch-Gordan coupled invariant
    combinations.
    """
    if d not in (1, 2):
        raise ValueError("d must be 1 or 2")
    if n_particles < 1 or degree < 0:
        raise ValueError("need n_particles >= 1 and degree >= 0")

    if d == 1:
        all_k = _circle_indices(n_particles, degree)
        inv = [k for k in all_k if sum(k) == 0]
        non = [k for k in all_k if sum(k) != 0]
        indices = tuple(inv + non)
        p = len(indices)
        n_inv = len(inv)
        coupling = np.zeros((p, n_inv), dtype=complex)
        coupling[:n_inv, :] = np.eye(n_inv)
        sums = np.array([sum(k) for k in indices], dtype=int)
        return BasisSpec(1, n_particles, degree, indices, n_inv, coupling, sums=sums)

    funcs = invariant_couplings(n_particles, degree)
    by_l = {}
    for f in funcs:
        by_l.setdefault(f.l, []).append(f)

    indices = []
    blocks = []
    n_inv_total = sum(len(v) for v in by_l.values())
    inv_offset = 0
    start = 0
    raw_blocks = []
    for l in _l_tuples(n_particles, degree):
        ms = _m_tuples(l)
        dim = len(ms)
        indices.extend((l, m) for m in ms)
        block_funcs = by_l.get(l, [])
        vecs = np.zeros((dim, len(block_funcs)), dtype=complex)
        pos = {m: i for i, m in enumerate(ms)}
        for j, f in enumerate(block_funcs):
            for row, c in zip(map(tuple, f.ms), f.coeffs):
                vecs[pos[row], j] = c
        vecs = _gram_schmidt_check(vecs)
        n_inv_b = vecs.shape[1]
        if n_inv_b:
            q, _ = np.linalg.qr(np.concatenate([vecs, np.eye(dim)], axis=1))
            u = np.concatenate([vecs, q[:, n_inv_b:dim]], axis=1)
        else:
            u = np.eye(dim, dtype=complex)
        raw_blocks.append((l, start, start + dim, u, n_inv_b, inv_offset))
        inv_offset += n_inv_b
        start += dim
    p = start
    assert inv_offset == n_inv_total

    non_offset = n_inv_total
    coupling = np.zeros((p, n_inv_total), dtype=complex)
    for (l, b_start, b_stop, u, n_inv_b, inv_off) in raw_blocks:
        dim = b_stop - b_start
        work = np.empty(dim, dtype=int)
        work[:n_inv_b] = np.arange(inv_off, inv_off + n_inv_b)
        work[n_inv_b:] = np.arange(non_offset, non_offset + dim - n_inv_b)
        non_offset += dim - n_inv_b
        blocks.append(Block(l, b_start, b_stop, u, n_inv_b, work))
        coupling[b_start:b_stop, :n_inv_total][:, inv_off:inv_off + n_inv_b] = u[:, :n_inv_b]

    gram = coupling.conj().T @ coupling
    assert np.abs(gram - np.eye(n_inv_total)).max() < 1e-12

    return BasisSpec(2, n_particles, degree, tuple(indices), n_inv_total, coupling,
                     blocks=tuple(blocks), invariant_funcs=tuple(funcs))


def sym_coeffs(beta: np.ndarray, basis: BasisSpec) -> np.ndarray:
    """Orthogonal projection of a working coefficient vector onto the
    invariant subspace: the non-invariant tail is zeroed.

    For d=1 this is exactly the coefficient-space Haar average: entries with
    sum(k) != 0 vanish, the rest are untouched.
    """
    beta = np.asarray(beta)
    if beta.shape[0] != basis.size:
        raise ValueError(f"coefficient length {beta.shape[0]} != basis size {basis.size}")
    out = beta.copy()
    out[basis.invariant_count:] = 0.0
    return out
