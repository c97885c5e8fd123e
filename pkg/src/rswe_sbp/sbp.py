r"""Diagonal-norm SBP(4,2) first-derivative operators and their 2D extensions.

The 1D operator :math:`D = H^{-1} Q` on :math:`n` equispaced nodes of the unit
interval satisfies

.. math::

    f^T H (D g) + (D f)^T H g = f_n g_n - f_1 g_1,

with a fourth-order centred interior stencil and a second-order accurate
boundary closure on the first and last four rows. 2D grid functions are
stored as C-ordered ``(n_q, n_r)`` arrays, so flattening them gives the
row-wise vector on which :math:`D_q \otimes I` and :math:`I \otimes D_r` act.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from rswe_sbp._accel import USE_NUMBA, njit
from rswe_sbp.errors import ConfigError, DomainError

# Source-of-truth coefficient table for the classical diagonal-norm SBP(4,2).
# Norm weights of the first four nodes, in units of the grid spacing.
NORM_BOUNDARY = (Fraction(17, 48), Fraction(59, 48), Fraction(43, 48), Fraction(49, 48))
# Rows 0..3, columns 0..5 of Q = H D, in units where h = 1.
Q_BOUNDARY = (
    (Fraction(-1, 2), Fraction(59, 96), Fraction(-1, 12), Fraction(-1, 32), Fraction(0), Fraction(0)),
    (Fraction(-59, 96), Fraction(0), Fraction(59, 96), Fraction(0), Fraction(0), Fraction(0)),
    (Fraction(1, 12), Fraction(-59, 96), Fraction(0), Fraction(59, 96), Fraction(-1, 12), Fraction(0)),
    (Fraction(1, 32), Fraction(0), Fraction(-59, 96), Fraction(0), Fraction(2, 3), Fraction(-1, 12)),
)
# Interior stencil at offsets -2..2.
INTERIOR_STENCIL = (Fraction(1, 12), Fraction(-2, 3), Fraction(0), Fraction(2, 3), Fraction(-1, 12))

MIN_POINTS = 8
_NB = 4  # closure rows per side
_NC = 6  # closure columns per side


def _boundary_block():
    """D restricted to the left closure, with h = 1."""
    return np.array(
        [[float(Q_BOUNDARY[i][j] / NORM_BOUNDARY[i]) for j in range(_NC)] for i in range(_NB)]
    )


@dataclass(frozen=True, eq=False)
class SbpOperator1D:
    """SBP(4,2) operator on ``n`` equispaced nodes of [0, 1].

    ``block`` and ``stencil`` are pre-scaled by ``1/spacing``; the right closure
    is ``D[n-1-i, n-1-j] = -block[i, j]``.
    """

    n: int
    spacing: float
    norm_weights: np.ndarray
    block: np.ndarray
    stencil: np.ndarray
    nodes: np.ndarray = field(repr=False)

    def dense(self) -> np.ndarray:
        """Materialize D as an ``(n, n)`` matrix. Intended for tests."""
        n = self.n
        d = np.zeros((n, n))
        for i in range(_NB, n - _NB):
            d[i, i - 2 : i + 3] = self.stencil
        d[:_NB, :_NC] = self.block
        d[n - _NB :, n - _NC :] = -self.block[::-1, ::-1]
        return d

    def apply(self, f: np.ndarray, axis: int = 0) -> np.ndarray:
        """Apply D along ``axis`` of a 1D or 2D array."""
        f = np.asarray(f, dtype=float)
        if f.shape[axis] != self.n:
            raise ValueError(f"axis {axis} has length {f.shape[axis]}, operator expects {self.n}")
        if f.ndim == 1:
            return _apply_axis0(self.block, self.stencil, f[:, None])[:, 0]
        if f.ndim != 2:
            raise ValueError("SBP operators act on 1D or 2D arrays")
        if axis == 0:
            return _apply_axis0(self.block, self.stencil, f)
        return _apply_axis1(self.block, self.stencil, f)


def build_sbp_d1(n: int) -> SbpOperator1D:
    """Build the SBP(4,2) first-derivative operator on ``n`` nodes of [0, 1]."""
    if int(n) != n or n < MIN_POINTS:
        raise ConfigError(f"SBP(4,2) needs at least {MIN_POINTS} grid points, got {n}")
    n = int(n)
    h = 1.0 / (n - 1)
    weights = np.full(n, h)
    left = np.array([float(w) for w in NORM_BOUNDARY]) * h
    weights[:_NB] = left
    weights[n - _NB :] = left[::-1]
    block = _boundary_block() / h
    stencil = np.array([float(c) for c in INTERIOR_STENCIL]) / h
    for arr in (weights, block, stencil):
        arr.setflags(write=False)
    nodes = np.linspace(0.0, 1.0, n)
    nodes.setflags(write=False)
    return SbpOperator1D(n, h, weights, block, stencil, nodes)


# ----------------------------------------------------------------------------
# kernels

def _apply_axis0_numpy(block, stencil, f):
    n = f.shape[0]
    out = np.empty_like(f)
    s0, s1, _, s3, s4 = stencil
    out[_NB : n - _NB] = (
        s0 * f[_NB - 2 : n - _NB - 2]
        + s1 * f[_NB - 1 : n - _NB - 1]
        + s3 * f[_NB + 1 : n - _NB + 1]
        + s4 * f[_NB + 2 : n - _NB + 2]
    )
    out[:_NB] = block @ f[:_NC]
    out[n - _NB :] = -(block @ f[n - 1 : n - _NC - 1 : -1])[::-1]
    return out


def _apply_axis1_numpy(block, stencil, f):
    return _apply_axis0_numpy(block, stencil, f.T).T


@njit
def _apply_axis0_numba(block, stencil, f):
    n, m = f.shape
    out = np.empty((n, m))
    s0 = stencil[0]
    s1 = stencil[1]
    s3 = stencil[3]
    s4 = stencil[4]
    for i in range(_NB, n - _NB):
        for j in range(m):
            out[i, j] = s0 * f[i - 2, j] + s1 * f[i - 1, j] + s3 * f[i + 1, j] + s4 * f[i + 2, j]
    for i in range(_NB):
        for j in range(m):
            acc_l = 0.0
            acc_r = 0.0
            for k in range(_NC):
                acc_l += block[i, k] * f[k, j]
                acc_r += block[i, k] * f[n - 1 - k, j]
            out[i, j] = acc_l
            out[n - 1 - i, j] = -acc_r
    return out


@njit
def _apply_axis1_numba(block, stencil, f):
    n, m = f.shape
    out = np.empty((n, m))
    s0 = stencil[0]
    s1 = stencil[1]
    s3 = stencil[3]
    s4 = stencil[4]
    for i in range(n):
        for j in range(_NB, m - _NB):
            out[i, j] = s0 * f[i, j - 2] + s1 * f[i, j - 1] + s3 * f[i, j + 1] + s4 * f[i, j + 2]
        for j in range(_NB):
            acc_l = 0.0
            acc_r = 0.0
            for k in range(_NC):
                acc_l += block[j, k] * f[i, k]
                acc_r += block[j, k] * f[i, m - 1 - k]
            out[i, j] = acc_l
            out[i, m - 1 - j] = -acc_r
    return out


if USE_NUMBA:
    _apply_axis0 = _apply_axis0_numba
    _apply_axis1 = _apply_axis1_numba
else:
    _apply_axis0 = _apply_axis0_numpy
    _apply_axis1 = _apply_axis1_numpy


# ----------------------------------------------------------------------------
# 2D tensor-product helpers

@dataclass(frozen=True)
class TensorLayout:
    """Row-wise layout of an ``n_q x n_r`` grid function: flat = i * n_r + j."""

    n_q: int
    n_r: int

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_q, self.n_r)

    @property
    def size(self) -> int:
        return self.n_q * self.n_r

    def flat_index(self, i, j):
        return np.asarray(i) * self.n_r + np.asarray(j)

    def unravel(self, k):
        return np.divmod(np.asarray(k), self.n_r)

    def check(self, f: np.ndarray) -> np.ndarray:
        f = np.asarray(f, dtype=float)
        if f.shape == (self.size,):
            f = f.reshape(self.shape)
        if f.shape != self.shape:
            raise ValueError(f"grid function has shape {f.shape}, layout is {self.shape}")
        return f


def apply_dq(layout: TensorLayout, op: SbpOperator1D, f: np.ndarray) -> np.ndarray:
    """(D_q x I) f, applied line by line along the q axis."""
    return op.apply(layout.check(f), axis=0)


def apply_dr(layout: TensorLayout, op: SbpOperator1D, f: np.ndarray) -> np.ndarray:
    """(I x D_r) f, applied line by line along the r axis."""
    return op.apply(layout.check(f), axis=1)


def inner_product(layout, weights_q, weights_r, f, g, pointwise_weight=1.0) -> float:
    """sum_ij f_ij g_ij w_ij h_i^(q) h_j^(r)."""
    f = layout.check(f)
    g = layout.check(g)
    w = np.broadcast_to(np.asarray(pointwise_weight, dtype=float), layout.shape)
    if np.any(w <= 0.0):
        raise DomainError("pointwise weight must be strictly positive")
    return float(np.einsum("i,ij,j->", weights_q, f * g * w, weights_r))
