"""Plumbing shared by the linear and nonlinear semi-discrete models."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from rswe_sbp.boundary import BoundarySpec, edge_specs
from rswe_sbp.errors import BlowupError
from rswe_sbp.grid import Edge, Grid2D
from rswe_sbp.state import PhysParams

Exact = Callable[[float, np.ndarray, np.ndarray], tuple]
Forcing = Callable[[float], np.ndarray]


@dataclass(frozen=True)
class EdgeData:
    edge: Edge
    spec: BoundarySpec
    x: np.ndarray
    y: np.ndarray
    sat_scale: np.ndarray  # |grad xi| / h_boundary for the SAT lift


class SbpModel:
    """Semi-discrete model: right-hand side on a (3, n_q, n_r) state array."""

    name = "base"

    def __init__(self, grid: Grid2D, params: PhysParams, bcs, exact: Exact | None = None,
                 forcing: Forcing | None = None):
        self.grid = grid
        self.p = params
        self.exact = exact
        self.forcing = forcing
        self.specs = edge_specs(bcs)
        self.edges = []
        for e in grid.edges:
            self.edges.append(
                EdgeData(e, self.specs[e.name], e.take(grid.x), e.take(grid.y), e.scale * e.inv_h)
            )
        self._weights = grid.cell_weights

    # -- helpers -----------------------------------------------------------
    @staticmethod
    def add_edge(out: np.ndarray, ed: EdgeData, comps) -> None:
        e = ed.edge
        for k, c in enumerate(comps):
            if e.axis == 0:
                out[k, e.index, :] += c
            else:
                out[k, :, e.index] += c

    def check_tendency(self, dq: np.ndarray, term: str) -> None:
        if not np.all(np.isfinite(dq)):
            k, i, j = np.argwhere(~np.isfinite(dq))[0]
            names = ("h", "u", "v")
            raise BlowupError(f"non-finite {term} tendency of {names[k]} at node (i={i}, j={j})")

    def integrate(self, f: np.ndarray) -> float:
        # fixed reduction order keeps sums deterministic
        return float(np.sum(self._weights * f))

    # -- interface ----------------------------------------------------------
    def volume_rhs(self, q: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def sat(self, q: np.ndarray, t: float) -> np.ndarray:
        raise NotImplementedError

    def rhs(self, q: np.ndarray, t: float, with_sat: bool = True) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        dq = self.volume_rhs(q)
        self.check_tendency(dq, "interior")
        if with_sat:
            sat = self.sat(q, t)
            self.check_tendency(sat, "SAT")
            dq += sat
        if self.forcing is not None:
            dq += self.forcing(t)
        return dq

    def __call__(self, q: np.ndarray, t: float) -> np.ndarray:
        return self.rhs(q, t)
