"""Physical parameters, prognostic fields and the derived diagnostic fields."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from rswe_sbp.errors import BlowupError, ConfigError, PositivityError
from rswe_sbp.grid import Grid2D
from rswe_sbp.operators import curl_d


@dataclass(frozen=True)
class PhysParams:
    """Constants and background state. ``U``/``V`` default to -0.5 sqrt(gH)."""

    g: float = 9.81
    f_c: float = 2.0
    H: float = 2.0
    U: float | None = None
    V: float | None = None
    L: float = 100.0

    def __post_init__(self):
        if not self.g > 0:
            raise ConfigError(f"g must be positive, got {self.g}")
        if not self.H > 0:
            raise ConfigError(f"H must be positive, got {self.H}")
        if not self.L > 0:
            raise ConfigError(f"L must be positive, got {self.L}")
        default = -0.5 * math.sqrt(self.g * self.H)
        if self.U is None:
            object.__setattr__(self, "U", default)
        if self.V is None:
            object.__setattr__(self, "V", default)

    @property
    def c(self) -> float:
        return math.sqrt(self.g * self.H)

    @property
    def speed(self) -> float:
        return math.hypot(self.U, self.V)

    @property
    def froude(self) -> float:
        return self.speed / self.c

    def check_subcritical(self) -> None:
        if not self.froude < 1.0:
            raise ConfigError(
                f"background flow is not subcritical: |U|/sqrt(gH) = {self.froude:.4g} >= 1 "
                f"(U={self.U}, V={self.V}, H={self.H})"
            )

    def with_(self, **kw) -> "PhysParams":
        return replace(self, **kw)


@dataclass
class FieldState:
    h: np.ndarray
    u: np.ndarray
    v: np.ndarray
    t: float = 0.0

    def pack(self) -> np.ndarray:
        """Stack into a (3, n_q, n_r) array, the layout the integrator works on."""
        return np.stack([self.h, self.u, self.v])

    @classmethod
    def unpack(cls, q: np.ndarray, t: float = 0.0) -> "FieldState":
        return cls(q[0], q[1], q[2], t)

    def check_finite(self) -> None:
        for name in ("h", "u", "v"):
            f = getattr(self, name)
            bad = np.argwhere(~np.isfinite(f))
            if bad.size:
                i, j = bad[0]
                raise BlowupError(f"non-finite {name} at node (i={i}, j={j}), t={self.t:.6g}")

    def check_positive(self) -> None:
        check_positive_height(self.h, self.t)


def check_positive_height(h: np.ndarray, t: float | None = None) -> None:
    bad = np.argwhere(~(h > 0.0))
    if bad.size:
        i, j = bad[0]
        when = "" if t is None else f", t={t:.6g}"
        raise PositivityError(f"water height h={h[i, j]:.6g} <= 0 at node (i={i}, j={j}){when}")


@dataclass(frozen=True)
class DiagnosticFields:
    Fu: np.ndarray
    Fv: np.ndarray
    G: np.ndarray
    omega: np.ndarray


def diagnostics_nonlinear(s: FieldState, p: PhysParams, grid: Grid2D) -> DiagnosticFields:
    """Mass flux h*u, Bernoulli potential |u|^2/2 + g h, absolute vorticity."""
    check_positive_height(s.h, s.t)
    G = 0.5 * (s.u * s.u + s.v * s.v) + p.g * s.h
    return DiagnosticFields(s.h * s.u, s.h * s.v, G, curl_d(s.u, s.v, grid) + p.f_c)


def diagnostics_linear(s: FieldState, p: PhysParams, grid: Grid2D) -> DiagnosticFields:
    """Linearized flux H u + U h, potential U.u + g h and relative vorticity."""
    Fu = p.H * s.u + p.U * s.h
    Fv = p.H * s.v + p.V * s.h
    G = p.U * s.u + p.V * s.v + p.g * s.h
    return DiagnosticFields(Fu, Fv, G, curl_d(s.u, s.v, grid))
