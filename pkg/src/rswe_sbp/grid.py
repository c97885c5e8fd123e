"""Mapped unit-square grids with SBP-consistent metric terms.

Three analytic maps from the reference square (q, r) in [0, 1]^2 are provided.
Coordinate derivatives are obtained by applying the SBP operators to the
sampled coordinates, which makes the discrete free-stream identities hold to
rounding error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from rswe_sbp.errors import ConfigError, DomainError, MeshValidityError
from rswe_sbp.sbp import SbpOperator1D, TensorLayout, build_sbp_d1


@dataclass(frozen=True)
class CartesianMap:
    L: float = 100.0
    kind = "cartesian"

    def __call__(self, q, r):
        return self.L * np.asarray(q, dtype=float), self.L * np.asarray(r, dtype=float)

    def jacobian(self, q, r):
        q = np.asarray(q, dtype=float)
        one = np.ones_like(q + np.asarray(r, dtype=float))
        return self.L * one, 0.0 * one, 0.0 * one, self.L * one


@dataclass(frozen=True)
class PanelMap:
    """Gnomonic (equiangular) cubed-sphere panel projected onto the plane.

    ``scale`` stretches the projection about the centre; ``scale = sqrt(3)``
    puts the corners on the corners of [0, L]^2.
    """

    L: float = 100.0
    scale: float = 1.0
    kind = "cubedsphere"

    def __call__(self, q, r):
        a = 0.25 * math.pi * (2.0 * np.asarray(q, dtype=float) - 1.0)
        b = 0.25 * math.pi * (2.0 * np.asarray(r, dtype=float) - 1.0)
        X, Y = np.tan(a), np.tan(b)
        s = self.scale / np.sqrt(1.0 + X * X + Y * Y)
        return 0.5 * self.L * (1.0 + s * X), 0.5 * self.L * (1.0 + s * Y)

    def jacobian(self, q, r):
        a = 0.25 * math.pi * (2.0 * np.asarray(q, dtype=float) - 1.0)
        b = 0.25 * math.pi * (2.0 * np.asarray(r, dtype=float) - 1.0)
        X, Y = np.tan(a), np.tan(b)
        Xq = 0.5 * math.pi * (1.0 + X * X)
        Yr = 0.5 * math.pi * (1.0 + Y * Y)
        d = 1.0 + X * X + Y * Y
        k = 0.5 * self.L * self.scale * d ** -1.5
        x_q = k * (1.0 + Y * Y) * Xq
        x_r = -k * X * Y * Yr
        y_q = -k * X * Y * Xq
        y_r = k * (1.0 + X * X) * Yr
        return x_q, x_r, y_q, y_r


@dataclass(frozen=True)
class SeashellMap:
    """Logarithmic-spiral annulus sector.

    theta = theta1 * q and rho = exp(b * theta) * (c1 + (c2 - c1) * r). The
    sector is swept clockwise, y = y_c - rho sin(theta), so that the map is
    orientation preserving (J > 0) in the (q, r) ordering.
    """

    theta1: float = 1.5 * math.pi
    b: float = 0.15
    c1: float = 10.0
    c2: float = 25.0
    # centre placed so (50, 60) sits mid-sweep, about 10 m from the boundary
    xc: float = 67.6
    yc: float = 77.6
    kind = "seashell"

    def __call__(self, q, r):
        theta = self.theta1 * np.asarray(q, dtype=float)
        rho = np.exp(self.b * theta) * (self.c1 + (self.c2 - self.c1) * np.asarray(r, dtype=float))
        return self.xc + rho * np.cos(theta), self.yc - rho * np.sin(theta)

    def jacobian(self, q, r):
        theta = self.theta1 * np.asarray(q, dtype=float)
        e = np.exp(self.b * theta)
        rho = e * (self.c1 + (self.c2 - self.c1) * np.asarray(r, dtype=float))
        rho_q = self.b * self.theta1 * rho
        rho_r = e * (self.c2 - self.c1)
        c, s = np.cos(theta), np.sin(theta)
        x_q = rho_q * c - rho * s * self.theta1
        y_q = -(rho_q * s + rho * c * self.theta1)
        return x_q, rho_r * c, y_q, -rho_r * s


MeshKind = Union[CartesianMap, SeashellMap, PanelMap]
MESH_KINDS = ("cartesian", "seashell", "cubedsphere")


def make_mesh(kind: str, L: float = 100.0, **params) -> MeshKind:
    """Construct a mapping by name. Extra keyword arguments are mapping parameters."""
    kind = kind.strip().lower()
    if kind == "cartesian":
        if params:
            raise ConfigError(f"cartesian mesh takes no parameters, got {sorted(params)}")
        return CartesianMap(L=L)
    if kind == "seashell":
        return SeashellMap(**params)
    if kind in ("cubedsphere", "panel"):
        return PanelMap(L=L, **params)
    raise ConfigError(f"unknown mesh kind {kind!r}; expected one of {MESH_KINDS}")


def map_reference(kind: MeshKind, q, r):
    """Map reference coordinates to physical (x, y)."""
    q = np.asarray(q, dtype=float)
    r = np.asarray(r, dtype=float)
    tol = 1e-14
    if np.any(~np.isfinite(q)) or np.any(~np.isfinite(r)):
        raise DomainError("reference coordinates must be finite")
    if np.any((q < -tol) | (q > 1 + tol) | (r < -tol) | (r > 1 + tol)):
        raise DomainError("reference coordinates must lie in [0, 1]^2")
    return kind(q, r)


@dataclass(frozen=True, eq=False)
class Edge:
    """One side of the reference square and the data its SATs need.

    ``index`` is the grid-line index (0 or n-1) along ``axis``; per-node arrays
    run along the other axis.
    """

    name: str
    axis: int
    side: int  # 0 for xi = 0, 1 for xi = 1
    index: int
    nx: np.ndarray
    ny: np.ndarray
    scale: np.ndarray  # |grad xi|
    J: np.ndarray
    weights: np.ndarray  # quadrature weights along the edge
    inv_h: float  # 1 / boundary norm weight across the edge

    @property
    def tx(self):
        return self.ny

    @property
    def ty(self):
        return -self.nx

    def take(self, f: np.ndarray) -> np.ndarray:
        """Restrict a grid function to this edge."""
        return f[self.index, :] if self.axis == 0 else f[:, self.index]

    def quadrature(self, f: np.ndarray) -> float:
        """Boundary quadrature of sum_j J |grad xi| w_j f_j."""
        return float(np.sum(self.J * self.scale * self.weights * f))


@dataclass(frozen=True, eq=False)
class Grid2D:
    mapping: MeshKind
    layout: TensorLayout
    op_q: SbpOperator1D
    op_r: SbpOperator1D
    x: np.ndarray
    y: np.ndarray
    x_q: np.ndarray
    x_r: np.ndarray
    y_q: np.ndarray
    y_r: np.ndarray
    J: np.ndarray
    edges: tuple = field(repr=False)

    # metric terms scaled by J
    @property
    def Jq_x(self):
        return self.y_r

    @property
    def Jr_x(self):
        return -self.y_q

    @property
    def Jq_y(self):
        return -self.x_r

    @property
    def Jr_y(self):
        return self.x_q

    @property
    def q_x(self):
        return self.y_r / self.J

    @property
    def q_y(self):
        return -self.x_r / self.J

    @property
    def r_x(self):
        return -self.y_q / self.J

    @property
    def r_y(self):
        return self.x_q / self.J

    @property
    def shape(self):
        return self.layout.shape

    @property
    def cell_weights(self) -> np.ndarray:
        """J h_i^(q) h_j^(r), the volume quadrature weights."""
        return self.J * np.outer(self.op_q.norm_weights, self.op_r.norm_weights)

    def integrate(self, f) -> float:
        return float(np.sum(self.cell_weights * f))

    def edge(self, name: str) -> Edge:
        for e in self.edges:
            if e.name == name:
                return e
        raise KeyError(name)

    def min_spacing_ratio(self) -> float:
        """min over nodes and both axes of h_xi / |grad xi|."""
        gq = np.hypot(self.q_x, self.q_y)
        gr = np.hypot(self.r_x, self.r_y)
        return float(min(np.min(self.op_q.spacing / gq), np.min(self.op_r.spacing / gr)))

    def boundary_polygon(self, samples: int = 400) -> np.ndarray:
        """Closed counter-clockwise polygon tracing the mapped boundary."""
        s = np.linspace(0.0, 1.0, samples, endpoint=False)
        z, o = np.zeros_like(s), np.ones_like(s)
        q = np.concatenate([s, o, 1.0 - s, z])
        r = np.concatenate([z, s, o, 1.0 - s])
        x, y = self.mapping(q, r)
        return np.column_stack([x, y])


EDGE_NAMES = (("west", 0, 0), ("east", 0, 1), ("south", 1, 0), ("north", 1, 1))


def build_grid(kind: MeshKind, n_q: int, n_r: int | None = None, sbp=None) -> Grid2D:
    """Sample the mapping and compute metrics by SBP differentiation.

    ``sbp`` may be one operator used on both axes (requires n_q == n_r), a
    pair of operators, or None to build them.
    """
    n_r = n_q if n_r is None else n_r
    if sbp is None:
        op_q, op_r = build_sbp_d1(n_q), build_sbp_d1(n_r)
    elif isinstance(sbp, SbpOperator1D):
        op_q = op_r = sbp
    else:
        op_q, op_r = sbp
    if (op_q.n, op_r.n) != (n_q, n_r):
        raise ConfigError(f"operator sizes {(op_q.n, op_r.n)} do not match grid {(n_q, n_r)}")
    layout = TensorLayout(n_q, n_r)
    Q, R = np.meshgrid(op_q.nodes, op_r.nodes, indexing="ij")
    x, y = map_reference(kind, Q, R)
    x_q, x_r = op_q.apply(x, axis=0), op_r.apply(x, axis=1)
    y_q, y_r = op_q.apply(y, axis=0), op_r.apply(y, axis=1)
    J = x_q * y_r - x_r * y_q
    bad = np.argwhere(~(J > 0.0))
    if bad.size:
        i, j = bad[0]
        raise MeshValidityError(
            f"non-positive Jacobian J={J[i, j]:.6g} at node (i={i}, j={j}), x={x[i, j]:.6g}, y={y[i, j]:.6g}"
        )
    grads = {0: (y_r / J, -x_r / J), 1: (-y_q / J, x_q / J)}
    edges = []
    for name, axis, side in EDGE_NAMES:
        n_axis = (n_q, n_r)[axis]
        index = 0 if side == 0 else n_axis - 1
        gx, gy = grads[axis]
        take = (lambda f: f[index, :]) if axis == 0 else (lambda f: f[:, index])
        gx, gy = take(gx), take(gy)
        scale = np.hypot(gx, gy)
        sign = -1.0 if side == 0 else 1.0
        along = op_r if axis == 0 else op_q
        across = op_q if axis == 0 else op_r
        for arr in (gx, gy, scale):
            arr.setflags(write=False)
        edges.append(
            Edge(
                name=name,
                axis=axis,
                side=side,
                index=index,
                nx=sign * gx / scale,
                ny=sign * gy / scale,
                scale=scale,
                J=take(J),
                weights=along.norm_weights,
                inv_h=1.0 / across.norm_weights[0],
            )
        )
    for arr in (x, y, x_q, x_r, y_q, y_r, J):
        arr.setflags(write=False)
    return Grid2D(kind, layout, op_q, op_r, x, y, x_q, x_r, y_q, y_r, J, tuple(edges))


def contains_point(grid_or_kind, x0: float, y0: float, samples: int = 400) -> bool:
    """Ray-casting point-in-polygon test against the densely sampled boundary."""
    if isinstance(grid_or_kind, Grid2D):
        poly = grid_or_kind.boundary_polygon(samples)
    else:
        s = np.linspace(0.0, 1.0, samples, endpoint=False)
        z, o = np.zeros_like(s), np.ones_like(s)
        px, py = grid_or_kind(np.concatenate([s, o, 1.0 - s, z]), np.concatenate([z, s, o, 1.0 - s]))
        poly = np.column_stack([px, py])
    xa, ya = poly[:, 0], poly[:, 1]
    xb, yb = np.roll(xa, -1), np.roll(ya, -1)
    crosses = (ya > y0) != (yb > y0)
    with np.errstate(divide="ignore", invalid="ignore"):
        xcross = xa + (y0 - ya) * (xb - xa) / (yb - ya)
    return bool(np.count_nonzero(crosses & (x0 < xcross)) % 2 == 1)


def distance_to_boundary(grid_or_kind, x0: float, y0: float, samples: int = 2000) -> float:
    """Distance from a point to the sampled boundary polygon vertices."""
    g = grid_or_kind
    s = np.linspace(0.0, 1.0, samples, endpoint=False)
    z, o = np.zeros_like(s), np.ones_like(s)
    m = g.mapping if isinstance(g, Grid2D) else g
    px, py = m(np.concatenate([s, o, 1.0 - s, z]), np.concatenate([z, s, o, 1.0 - s]))
    return float(np.min(np.hypot(px - x0, py - y0)))
