"""Semi-discrete linear rotating shallow water model with characteristic SATs.

The state holds perturbations (h, u, v) about the background (H, U, V).
Inflow and outflow are decided by the sign of the background normal velocity
U_n at each boundary node, so the per-node BC parameters are fixed at setup.
"""

from __future__ import annotations

import numpy as np

from rswe_sbp._modelbase import SbpModel
from rswe_sbp.boundary import (
    CharacteristicFrame,
    boundary_data,
    linear_boundary_term_pointwise,
    linear_sat_pointwise,
    resolve_linear_gamma,
    select_linear_penalties,
)
from rswe_sbp.operators import curl_d, div_d, grad_d
from rswe_sbp.state import FieldState, PhysParams


class LinearRSWE(SbpModel):
    name = "linear"
    # c^2 H / 4 makes the SAT energy contribution equal the pointwise boundary term
    sat_prefactor = 0.25

    def __init__(self, grid, params: PhysParams, bcs, exact=None, forcing=None):
        super().__init__(grid, params, bcs, exact, forcing)
        params.check_subcritical()
        self._setup = []
        for ed in self.edges:
            e, spec = ed.edge, ed.spec
            U_n = e.nx * params.U + e.ny * params.V
            inflow = U_n < 0.0
            # well-posedness is checked only on the nodes where each family acts
            resolve_linear_gamma(spec.inflow, U_n[inflow], params.c, unsafe=spec.unsafe)
            resolve_linear_gamma(spec.outflow, U_n[~inflow], params.c, unsafe=spec.unsafe)
            g_in = resolve_linear_gamma(spec.inflow, U_n, params.c, unsafe=True)
            g_out = resolve_linear_gamma(spec.outflow, U_n, params.c, unsafe=True)
            gamma = np.where(inflow, g_in, g_out)
            pen = select_linear_penalties(gamma, U_n - params.c, spec.penalties)
            self._setup.append((U_n, inflow, gamma, pen))

    # -- volume terms ---------------------------------------------------------
    def volume_rhs(self, q):
        p, g = self.p, self.grid
        h, u, v = q
        Fu = p.H * u + p.U * h
        Fv = p.H * v + p.V * h
        G = p.U * u + p.V * v + p.g * h
        omega = curl_d(u, v, g)
        Gx, Gy = grad_d(G, g)
        out = np.empty_like(q)
        out[0] = -div_d(Fu, Fv, g)
        # u_t = -(omega U^perp + f_c u^perp + grad G), with a^perp = (-a_y, a_x)
        out[1] = omega * p.V + p.f_c * v - Gx
        out[2] = -omega * p.U - p.f_c * u - Gy
        return out

    # -- SATs -------------------------------------------------------------------
    def edge_data(self, k: int, t: float):
        """(d1, d2) in characteristic units at the nodes of edge ``k``."""
        ed = self.edges[k]
        U_n, inflow, _, _ = self._setup[k]
        spec = ed.spec
        # admissibility was checked per node mask at setup
        args = (t, ed.edge.nx, ed.edge.ny, self.p, spec.data, self.exact, ed.x, ed.y, True)
        d1_in, d2_in = boundary_data(spec.inflow, "linear", *args)
        if spec.outflow == spec.inflow:
            return d1_in, d2_in
        d1_out, d2_out = boundary_data(spec.outflow, "linear", *args)
        return np.where(inflow, d1_in, d1_out), np.where(inflow, d2_in, d2_out)

    def _edge_frame(self, k, q):
        e = self.edges[k].edge
        return CharacteristicFrame.build(e.take(q[0]), e.take(q[1]), e.take(q[2]), e.nx, e.ny, self.p)

    def sat(self, q, t):
        p = self.p
        out = np.zeros_like(q)
        kappa = self.sat_prefactor * p.c * p.c * p.H
        for k, ed in enumerate(self.edges):
            U_n, inflow, gamma, pen = self._setup[k]
            fr = self._edge_frame(k, q)
            d1, d2 = self.edge_data(k, t)
            r = fr.w2 - gamma * fr.w1 - d1
            s = np.where(inflow, pen.tau_s * U_n * (fr.w3 - d2), 0.0)
            sh, su, sv = linear_sat_pointwise(pen.tau_h * r, pen.tau_n * r, s, ed.edge.nx, ed.edge.ny, p)
            f = kappa * ed.sat_scale
            self.add_edge(out, ed, (f * sh, f * su, f * sv))
        return out

    # -- energy bookkeeping ---------------------------------------------------
    def energy(self, q) -> float:
        h, u, v = q
        return self.integrate(0.5 * self.p.H * (u * u + v * v) + 0.5 * self.p.g * h * h)

    def energy_rate(self, q, dq) -> float:
        p = self.p
        return self.integrate(p.g * q[0] * dq[0] + p.H * (q[1] * dq[1] + q[2] * dq[2]))

    def boundary_term(self, q) -> float:
        """Boundary quadrature of -(g H h u_n + e U_n), the no-SAT energy flux."""
        p = self.p
        total = 0.0
        for ed in self.edges:
            e = ed.edge
            h, u, v = e.take(q[0]), e.take(q[1]), e.take(q[2])
            un = e.nx * u + e.ny * v
            U_n = e.nx * p.U + e.ny * p.V
            en = 0.5 * p.H * (u * u + v * v) + 0.5 * p.g * h * h
            total -= e.quadrature(p.g * p.H * h * un + en * U_n)
        return total

    def boundary_term_sat(self, q, t: float = 0.0) -> float:
        """Boundary term including SAT contributions, with the configured data."""
        p = self.p
        total = 0.0
        for k, ed in enumerate(self.edges):
            U_n, inflow, gamma, pen = self._setup[k]
            fr = self._edge_frame(k, q)
            d1, d2 = self.edge_data(k, t)
            bt = linear_boundary_term_pointwise(fr, gamma, pen, d1, d2)
            total += ed.edge.quadrature(bt)
        return 0.5 * p.c * p.c * p.H * total


def linear_rhs(s: FieldState, t, grid, p: PhysParams, bcs, with_sat: bool = True, **kw) -> FieldState:
    model = LinearRSWE(grid, p, bcs, **kw)
    return FieldState.unpack(model.rhs(s.pack(), t, with_sat=with_sat), t)


def linear_energy_rate(s: FieldState, tendency: FieldState, grid, p: PhysParams) -> float:
    w = grid.cell_weights
    return float(np.sum(w * (p.g * s.h * tendency.h + p.H * (s.u * tendency.u + s.v * tendency.v))))
