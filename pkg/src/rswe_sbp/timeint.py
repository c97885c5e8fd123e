"""Five-stage fourth-order low-storage Runge-Kutta and CFL step selection."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from rswe_sbp.errors import BlowupError, ConfigError
from rswe_sbp.grid import Grid2D
from rswe_sbp.state import PhysParams

Rhs = Callable[[np.ndarray, float], np.ndarray]


@dataclass(frozen=True)
class LsrkScheme:
    A: tuple
    B: tuple
    C: tuple

    @property
    def stages(self) -> int:
        return len(self.A)


# Carpenter and Kennedy (1994), RK4(3)5[2R+]C, solution 3.
CARPENTER_KENNEDY_45 = LsrkScheme(
    A=(
        0.0,
        -567301805773.0 / 1357537059087.0,
        -2404267990393.0 / 2016746695238.0,
        -3550918686646.0 / 2091501179385.0,
        -1275806237668.0 / 842570457699.0,
    ),
    B=(
        1432997174477.0 / 9575080441755.0,
        5161836677717.0 / 13612068292357.0,
        1720146321549.0 / 2090206949498.0,
        3134564353537.0 / 4481467310338.0,
        2277821191437.0 / 14882151754819.0,
    ),
    C=(
        0.0,
        1432997174477.0 / 9575080441755.0,
        2526269341429.0 / 6820363962896.0,
        2006345519317.0 / 3224310063776.0,
        2802321613138.0 / 2924317926251.0,
    ),
)


def lsrk45_step(q: np.ndarray, t: float, dt: float, rhs: Rhs, scheme: LsrkScheme = CARPENTER_KENNEDY_45):
    """Advance ``q`` by one step of size ``dt``. Returns a new array."""
    q = np.array(q, dtype=float, copy=True)
    k = np.zeros_like(q)
    for s in range(scheme.stages):
        k = scheme.A[s] * k + dt * rhs(q, t + scheme.C[s] * dt)
        q += scheme.B[s] * k
        if not np.all(np.isfinite(q)):
            raise BlowupError(f"non-finite state after RK stage {s + 1} of the step from t={t:.6g}")
    return q


def compute_dt(grid: Grid2D, p: PhysParams, cfl: float) -> float:
    """dt = CFL / (|U| + sqrt(gH)) * min_xi min_nodes h_xi / |grad xi|."""
    if not cfl > 0:
        raise ConfigError(f"cfl must be positive, got {cfl}")
    return cfl / (p.speed + p.c) * grid.min_spacing_ratio()


def integrate(q0: np.ndarray, t0: float, t1: float, dt: float, rhs: Rhs,
              stops: Iterable[float] = (), callback=None):
    """Integrate from t0 to t1 with nominal step dt.

    Each interval between consecutive ``stops`` (and t1) is split into equal
    steps no longer than dt, so those times are hit exactly.
    ``callback(step, t, q)`` is called after every step.
    """
    if not dt > 0:
        raise ConfigError(f"time step must be positive, got {dt}")
    targets = sorted({float(s) for s in stops if t0 < s < t1} | {float(t1)})
    q, t, step = np.array(q0, dtype=float, copy=True), float(t0), 0
    for target in targets:
        n = max(1, int(np.ceil((target - t) / dt - 1e-9)))
        h = (target - t) / n
        for i in range(n):
            q = lsrk45_step(q, t, h, rhs)
            t = target if i == n - 1 else t + h
            step += 1
            if callback is not None:
                callback(step, t, q)
    return q, t
