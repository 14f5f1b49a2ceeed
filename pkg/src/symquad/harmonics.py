"""Single-particle basis functions (circular exponentials, complex spherical
harmonics) and the unitary matrices describing how tensor-product bases
transform under rotations."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .coupling import BasisSpec
from .geometry import SO2, SO3, Rotation

_UNIT_TOL = 1e-10


def eval_fourier(k: int, theta) -> complex:
    """e^{i k theta}, the circular basis factor."""
    return np.exp(1j * k * np.asarray(theta, dtype=float))


@dataclass(frozen=True)
class SphericalIndex:
    """Degree/order pair (l, m) with |m| <= l."""

    l: int
    m: int

    def __post_init__(self):
        if self.l < 0 or abs(self.m) > self.l:
            raise ValueError(f"invalid spherical index l={self.l}, m={self.m}")


def sph_harm_table(l_max: int, vecs: np.ndarray) -> np.ndarray:
    """Complex spherical harmonics Y_l^m for all l <= l_max at unit vectors.

    Parameters
    ----------
    l_max : highest degree.
    vecs : (n, 3) array of unit vectors.

    Returns
    -------
    (n, (l_max+1)^2) complex array, column l*l + l + m holding Y_l^m.

    Condon-Shortley phase; evaluated by the stable upward recurrence on fully
    normalized associated Legendre functions.
    """
    vecs = np.atleast_2d(np.asarray(vecs, dtype=float))
    n = vecs.shape[0]
    ct = np.clip(vecs[:, 2], -1.0, 1.0)
    st = np.sqrt(np.maximum(0.0, 1.0 - ct * ct))
    phi = np.arctan2(vecs[:, 1], vecs[:, 0])

    # leg[:, l, m] = sqrt((2l+1)(l-m)! / (4 pi (l+m)!)) P_l^m(ct),  m >= 0
    leg = np.zeros((n, l_max + 1, l_max + 1))
    leg[:, 0, 0] = math.sqrt(1.0 / (4.0 * math.pi))
    for m in range(1, l_max + 1):
        leg[:, m, m] = -math.sqrt((2 * m + 1) / (2.0 * m)) * st * leg[:, m - 1, m - 1]
    for m in range(l_max):
        leg[:, m + 1, m] = math.sqrt(2 * m + 3.0) * ct * leg[:, m, m]
    for m in range(l_max + 1):
        for l in range(m + 2, l_max + 1):
            a = math.sqrt((4.0 * l * l - 1.0) / (l * l - m * m))
            b = math.sqrt(((l - 1.0) ** 2 - m * m) / (4.0 * (l - 1.0) ** 2 - 1.0))
            leg[:, l, m] = a * (ct * leg[:, l - 1, m] - b * leg[:, l - 2, m])

    out = np.empty((n, (l_max + 1) ** 2), dtype=complex)
    for l in range(l_max + 1):
        base = l * l + l
        out[:, base] = leg[:, l, 0]
        for m in range(1, l + 1):
            val = leg[:, l, m] * np.exp(1j * m * phi)
            out[:, base + m] = val
            out[:, base - m] = (-1) ** m * np.conj(val)
    return out


def eval_sph_harm(idx: SphericalIndex, r) -> complex:
    """Y_l^m at a single unit vector."""
    r = np.asarray(r, dtype=float)
    if abs(np.linalg.norm(r) - 1.0) > _UNIT_TOL:
        raise ValueError("eval_sph_harm expects a unit vector")
    table = sph_harm_table(idx.l, r.reshape(1, 3))
    return complex(table[0, idx.l * idx.l + idx.l + idx.m])


# ---------------------------------------------------------------------------
# Wigner matrices
# ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=64)
def _little_d_tables(l: int):
    mm = np.arange(-l, l + 1)
    mp = mm[:, None, None]
    m = mm[None, :, None]
    k = np.arange(0, 2 * l + 1)[None, None, :]
    a1 = l + m - k
    a2 = k
    a3 = mp - m + k
    a4 = l - mp - k
    valid = (a1 >= 0) & (a3 >= 0) & (a4 >= 0)
    logfact = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, 4 * l + 2)))))
    pref = 0.5 * (logfact[l + mp] + logfact[l - mp] + logfact[l + m] + logfact[l - m])
    den = (logfact[np.where(valid, a1, 0)] + logfact[a2]
           + logfact[np.where(valid, a3, 0)] + logfact[np.where(valid, a4, 0)])
    mag = np.where(valid, np.exp(pref - den), 0.0)
    sign = np.where((a3 % 2) == 0, 1.0, -1.0)
    pc = np.where(valid, 2 * l + m - mp - 2 * k, 0)
    ps = np.where(valid, mp - m + 2 * k, 0)
    return mag * sign, pc, ps


def wigner_little_d(l: int, beta: float) -> np.ndarray:
    """Real little-d matrix d^l_{m'm}(beta), rows m' and columns m from -l to l."""
    if l == 0:
        return np.ones((1, 1))
    coef, pc, ps = _little_d_tables(l)
    c = math.cos(beta / 2.0)
    s = math.sin(beta / 2.0)
    return np.sum(coef * (c ** pc) * (s ** ps), axis=2)


def wigner_block(l: int, alpha: float, beta: float, gamma: float) -> np.ndarray:
    """Unitary block W with Y_l^m(Q r) = sum_m' Y_l^{m'}(r) W_{m'm} for the
    active zyz rotation Q = Rz(alpha) Ry(beta) Rz(gamma)."""
    d = wigner_little_d(l, beta)
    mm = np.arange(-l, l + 1)
    return np.exp(1j * gamma * mm)[:, None] * d.T * np.exp(1j * alpha * mm)[None, :]


@dataclass(frozen=True)
class WignerBlock:
    """Degree-l transformation block of the spherical harmonics."""

    l: int
    matrix: np.ndarray


def wigner_d(l: int, q: Rotation) -> WignerBlock:
    """Transformation block of degree l for an SO(3) rotation.

    Satisfies the row-vector identity (Y_l^{-l}, ..., Y_l^{l}) o Q =
    (Y_l^{-l}, ..., Y_l^{l}) . W, hence W(Q1 o Q2) = W(Q2) W(Q1).
    """
    if q.group != SO3:
        raise ValueError("wigner_d expects an SO(3) rotation")
    return WignerBlock(l, wigner_block(l, *q.euler_zyz()))


# ---------------------------------------------------------------------------
# Generalized rotation matrices on tensor bases
# ---------------------------------------------------------------------------

def _check_group(basis: BasisSpec, q: Rotation):
    if (q.group == SO2) != (basis.d == 1):
        raise ValueError(f"{q.group} rotation does not act on a d={basis.d} basis")


def rotation_blocks(basis: BasisSpec, q: Rotation):
    """Blockwise data of the working-basis rotation matrix.

    d=1: the diagonal phase vector e^{i alpha sum(k)} in basis order.
    d=2: one dense unitary per l-block, rows/columns in the block's working
    order (invariant columns first), aligned with ``basis.blocks``.
    """
    _check_group(basis, q)
    if basis.d == 1:
        return np.exp(1j * q.angle * basis.sums)
    a, b, g = q.euler_zyz()
    w = [wigner_block(l, a, b, g) for l in range(basis.degree + 1)]
    out = []
    for blk in basis.blocks:
        kron = w[blk.l[0]]
        for li in blk.l[1:]:
            kron = np.kron(kron, w[li])
        out.append(blk.u.conj().T @ kron @ blk.u)
    return out


def generalized_d(basis: BasisSpec, q: Rotation) -> np.ndarray:
    """Dense unitary D(Q) with A o Q = A D(Q) for working design matrices A.

    Rotations fix the invariant columns, so D is the identity on the leading
    invariant_count coordinates and couples nothing across the split.  Under
    the row-vector convention the map reverses composition order:
    D(Q1 o Q2) = D(Q2) D(Q1).
    """
    blocks = rotation_blocks(basis, q)
    if basis.d == 1:
        return np.diag(blocks)
    out = np.zeros((basis.size, basis.size), dtype=complex)
    for blk, mat in zip(basis.blocks, blocks):
        out[np.ix_(blk.work_cols, blk.work_cols)] = mat
    return out


def apply_generalized_d(basis: BasisSpec, a_work: np.ndarray, q: Rotation) -> np.ndarray:
    """A . D(Q) computed blockwise, without materializing D."""
    blocks = rotation_blocks(basis, q)
    if basis.d == 1:
        return a_work * blocks[None, :]
    out = np.empty_like(a_work)
    for blk, mat in zip(basis.blocks, blocks):
        out[:, blk.work_cols] = a_work[:, blk.work_cols] @ mat
    return out
