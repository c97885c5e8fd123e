"""Semi-discrete nonlinear rotating shallow water model with entropy-stable SATs.

The BC weights (alpha, beta), their penalties and the inflow/outflow branch
are recomputed from the instantaneous boundary state on every call.
"""

from __future__ import annotations

import numpy as np

from rswe_sbp._modelbase import SbpModel
from rswe_sbp.boundary import (
    boundary_data,
    nonlinear_boundary_term_pointwise,
    normal_tangential,
    resolve_nonlinear_weights,
    select_nonlinear_penalties,
)
from rswe_sbp.operators import curl_d, div_d, grad_d
from rswe_sbp.state import FieldState, PhysParams, check_positive_height


class NonlinearRSWE(SbpModel):
    name = "nonlinear"

    def __init__(self, grid, params: PhysParams, bcs, exact=None, forcing=None):
        super().__init__(grid, params, bcs, exact, forcing)
        params.check_subcritical()
        # validate penalty overrides against the background state once
        bg = np.stack([np.full(grid.shape, params.H), np.full(grid.shape, params.U), np.full(grid.shape, params.V)])
        for k in range(len(self.edges)):
            self._edge_parts(k, bg, 0.0)

    def volume_rhs(self, q):
        p, g = self.p, self.grid
        h, u, v = q
        check_positive_height(h)
        G = 0.5 * (u * u + v * v) + p.g * h
        omega = curl_d(u, v, g) + p.f_c
        Gx, Gy = grad_d(G, g)
        out = np.empty_like(q)
        out[0] = -div_d(h * u, h * v, g)
        out[1] = omega * v - Gx
        out[2] = -omega * u - Gy
        return out

    def _edge_parts(self, k, q, t):
        ed = self.edges[k]
        e, spec = ed.edge, ed.spec
        h, u, v = e.take(q[0]), e.take(q[1]), e.take(q[2])
        un, us = normal_tangential(u, v, e.nx, e.ny)
        inflow = un < 0.0
        a_in, b_in = resolve_nonlinear_weights(spec.inflow, h, un, self.p.g)
        args = (t, e.nx, e.ny, self.p, spec.data, self.exact, ed.x, ed.y)
        d1, d2 = boundary_data(spec.inflow, "nonlinear", *args)
        if spec.outflow == spec.inflow:
            alpha, beta = a_in, b_in
        else:
            a_out, b_out = resolve_nonlinear_weights(spec.outflow, h, un, self.p.g)
            alpha, beta = np.where(inflow, a_in, a_out), np.where(inflow, b_in, b_out)
            d1_out, _ = boundary_data(spec.outflow, "nonlinear", *args)
            d1 = np.where(inflow, d1, d1_out)
        pen = select_nonlinear_penalties(alpha, beta, spec.penalties, where_free=True)
        return h, un, us, inflow, alpha, beta, pen, d1, d2

    def sat(self, q, t):
        out = np.zeros_like(q)
        g = self.p.g
        for k, ed in enumerate(self.edges):
            h, un, us, inflow, alpha, beta, pen, d1, d2 = self._edge_parts(k, q, t)
            r = alpha * (g * h + 0.5 * un * un) - beta * h * un - d1
            st = np.where(inflow, pen.tau_s * un * (us - d2), 0.0)
            nx, ny = ed.edge.nx, ed.edge.ny
            f = ed.sat_scale
            sh = pen.tau_h * r
            su = pen.tau_n * nx * r + ny * st
            sv = pen.tau_n * ny * r - nx * st
            self.add_edge(out, ed, (f * sh, f * su, f * sv))
        return out

    # -- energy / entropy bookkeeping ------------------------------------------
    def energy(self, q) -> float:
        h, u, v = q
        return self.integrate(0.5 * h * (u * u + v * v) + 0.5 * self.p.g * h * h)

    def energy_rate(self, q, dq) -> float:
        h, u, v = q
        G = 0.5 * (u * u + v * v) + self.p.g * h
        return self.integrate(G * dq[0] + h * (u * dq[1] + v * dq[2]))

    def boundary_term(self, q) -> float:
        """Boundary quadrature of -G F_n, the no-SAT energy flux."""
        total = 0.0
        for ed in self.edges:
            e = ed.edge
            h, u, v = e.take(q[0]), e.take(q[1]), e.take(q[2])
            G = 0.5 * (u * u + v * v) + self.p.g * h
            total -= e.quadrature(G * h * (e.nx * u + e.ny * v))
        return total

    def boundary_term_sat(self, q, t: float = 0.0) -> float:
        total = 0.0
        for k, ed in enumerate(self.edges):
            h, un, us, inflow, alpha, beta, pen, d1, d2 = self._edge_parts(k, q, t)
            bt = nonlinear_boundary_term_pointwise(h, un, us, self.p.g, alpha, beta, pen, d1, d2)
            total += ed.edge.quadrature(bt)
        return total


def nonlinear_rhs(s: FieldState, t, grid, p: PhysParams, bcs, with_sat: bool = True, **kw) -> FieldState:
    model = NonlinearRSWE(grid, p, bcs, **kw)
    return FieldState.unpack(model.rhs(s.pack(), t, with_sat=with_sat), t)


def nonlinear_energy_rate(s: FieldState, tendency: FieldState, grid, p: PhysParams) -> float:
    G = 0.5 * (s.u * s.u + s.v * s.v) + p.g * s.h
    w = grid.cell_weights
    return float(np.sum(w * (G * tendency.h + s.h * (s.u * tendency.u + s.v * tendency.v))))
