"""Energy monitors, error norms, the manufactured solution and scenario ICs."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from rswe_sbp.errors import ConfigError
from rswe_sbp.grid import CartesianMap, Grid2D, PanelMap, SeashellMap, contains_point
from rswe_sbp.state import FieldState, PhysParams


@dataclass(frozen=True)
class EnergyRecord:
    t: float
    E: float
    dEdt: float
    BT: float


def total_energy(model: str, s: FieldState, grid: Grid2D, p: PhysParams) -> float:
    """J-weighted quadrature of the elemental energy of either model."""
    if model not in ("linear", "nonlinear"):
        raise ConfigError(f"unknown model {model!r}")
    depth = p.H if model == "linear" else s.h
    e = 0.5 * depth * (s.u * s.u + s.v * s.v) + 0.5 * p.g * s.h * s.h
    return grid.integrate(e)


# ----------------------------------------------------------------------------
# manufactured solution

@dataclass(frozen=True)
class MmsSolution:
    """Trigonometric manufactured solution on [0, L]^2 with wavenumber 5 pi / L."""

    L: float = 100.0
    amplitude: float = 0.2

    @property
    def k(self) -> float:
        return 5.0 * math.pi / self.L

    def _parts(self, t, x, y):
        k = self.k
        ct, st = math.cos(math.pi * t), math.sin(math.pi * t)
        sx, cx = np.sin(k * np.asarray(x, float)), np.cos(k * np.asarray(x, float))
        sy, cy = np.sin(k * np.asarray(y, float)), np.cos(k * np.asarray(y, float))
        return k, ct, st, sx, cx, sy, cy

    def __call__(self, t, x, y):
        _, ct, st, sx, cx, sy, cy = self._parts(t, x, y)
        return 1.0 + self.amplitude * ct * cx * cy, ct * sx * sy, st * cx * cy

    def derivatives(self, t, x, y):
        """Dict of first derivatives h_t, h_x, ..., v_y."""
        k, ct, st, sx, cx, sy, cy = self._parts(t, x, y)
        a, pi = self.amplitude, math.pi
        return {
            "h_t": -a * pi * st * cx * cy,
            "h_x": -a * k * ct * sx * cy,
            "h_y": -a * k * ct * cx * sy,
            "u_t": -pi * st * sx * sy,
            "u_x": k * ct * cx * sy,
            "u_y": k * ct * sx * cy,
            "v_t": pi * ct * cx * cy,
            "v_x": -k * st * sx * cy,
            "v_y": -k * st * cx * sy,
        }

    def source(self, model: str, t, x, y, p: PhysParams):
        """Residual of the exact solution in the model equations."""
        h, u, v = self(t, x, y)
        d = self.derivatives(t, x, y)
        if model == "nonlinear":
            omega = d["v_x"] - d["u_y"] + p.f_c
            sh = d["h_t"] + d["h_x"] * u + h * d["u_x"] + d["h_y"] * v + h * d["v_y"]
            su = d["u_t"] - omega * v + u * d["u_x"] + v * d["v_x"] + p.g * d["h_x"]
            sv = d["v_t"] + omega * u + u * d["u_y"] + v * d["v_y"] + p.g * d["h_y"]
        elif model == "linear":
            omega = d["v_x"] - d["u_y"]
            sh = d["h_t"] + p.H * (d["u_x"] + d["v_y"]) + p.U * d["h_x"] + p.V * d["h_y"]
            su = d["u_t"] - omega * p.V - p.f_c * v + p.U * d["u_x"] + p.V * d["v_x"] + p.g * d["h_x"]
            sv = d["v_t"] + omega * p.U + p.f_c * u + p.U * d["u_y"] + p.V * d["v_y"] + p.g * d["h_y"]
        else:
            raise ConfigError(f"unknown model {model!r}")
        return sh, su, sv


def mms_exact(t, x, y, L: float = 100.0):
    return MmsSolution(L)(t, x, y)


def mms_source(model: str, t, x, y, p: PhysParams):
    return MmsSolution(p.L).source(model, t, x, y, p)


def mms_forcing(model: str, grid: Grid2D, p: PhysParams, sol: MmsSolution | None = None):
    """Forcing callable t -> (3, n_q, n_r) array of MMS source terms."""
    sol = sol or MmsSolution(p.L)
    x, y = grid.x, grid.y

    def forcing(t):
        return np.stack(sol.source(model, t, x, y, p))

    return forcing


# ----------------------------------------------------------------------------
# Gaussian initial condition

def default_center(kind) -> tuple[float, float]:
    if isinstance(kind, SeashellMap):
        return (50.0, 60.0)
    if isinstance(kind, (CartesianMap, PanelMap)):
        return (25.0, 25.0)
    raise ConfigError(f"no default Gaussian centre for mesh {kind!r}")


def gaussian_profile(x, y, x0: float, y0: float, width2: float = 9.0):
    return np.exp(-((x - x0) ** 2 + (y - y0) ** 2) / width2)


def gaussian_ic(kind, p: PhysParams, model: str, grid: Grid2D, center=None, sigma0: float | None = None):
    """Gaussian water-height bump. Nonlinear: H + sigma0 bump on (U, V). Linear: unit bump at rest."""
    x0, y0 = default_center(kind) if center is None else center
    if not contains_point(grid, x0, y0):
        raise ConfigError(f"Gaussian centre ({x0}, {y0}) lies outside the {kind.kind} domain")
    bump = gaussian_profile(grid.x, grid.y, x0, y0)
    if model == "linear":
        z = np.zeros(grid.shape)
        return FieldState(bump, z, z.copy(), 0.0)
    if model == "nonlinear":
        s0 = 0.1 * p.H if sigma0 is None else sigma0
        return FieldState(p.H + s0 * bump, np.full(grid.shape, p.U), np.full(grid.shape, p.V), 0.0)
    raise ConfigError(f"unknown model {model!r}")


# ----------------------------------------------------------------------------
# errors and rates

def error_l2(s: FieldState, exact: tuple, grid: Grid2D) -> float:
    """J-weighted discrete L2 norm of the three-component difference."""
    he, ue, ve = exact
    d2 = (s.h - he) ** 2 + (s.u - ue) ** 2 + (s.v - ve) ** 2
    return math.sqrt(grid.integrate(d2))


def convergence_rates(errors, spacings) -> list[float]:
    errors = list(errors)
    spacings = list(spacings)
    if len(errors) != len(spacings):
        raise ValueError("errors and spacings must have the same length")
    return [
        math.log(errors[i] / errors[i + 1]) / math.log(spacings[i] / spacings[i + 1])
        for i in range(len(errors) - 1)
    ]
