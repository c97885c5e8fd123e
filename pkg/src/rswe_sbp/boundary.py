"""Boundary-condition algebra shared by the linear and nonlinear models.

This covers characteristic variables of the linear boundary matrix, the BC
families and their reflection coefficient or weights, penalty selection that
makes the pointwise boundary term non-positive, and boundary data (far-field,
homogeneous, or sampled from an exact solution).

All functions are vectorized over boundary nodes.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from rswe_sbp.errors import ConfigError, PositivityError
from rswe_sbp.state import PhysParams

SQRT2 = math.sqrt(2.0)


# ----------------------------------------------------------------------------
# characteristic variables of the linear problem

def normal_tangential(u, v, nx, ny):
    """(u_n, u_s) with u_s measured along m = (n_y, -n_x)."""
    return nx * u + ny * v, ny * u - nx * v


def from_normal_tangential(un, us, nx, ny):
    """Inverse of :func:`normal_tangential` (the rotation is its own inverse)."""
    return nx * un + ny * us, ny * un - nx * us


def characteristic_transform(h, u, v, nx, ny, p: PhysParams):
    """w = S^T (h/H, u_n/c, u_s/c) for perturbation values."""
    c = p.c
    un, us = normal_tangential(np.asarray(u, float), np.asarray(v, float), nx, ny)
    p1 = np.asarray(h, float) / p.H
    p2 = un / c
    return (p1 + p2) / SQRT2, (p1 - p2) / SQRT2, us / c


def inverse_characteristic_transform(w1, w2, w3, nx, ny, p: PhysParams):
    c = p.c
    p1 = (np.asarray(w1, float) + w2) / SQRT2
    p2 = (np.asarray(w1, float) - w2) / SQRT2
    u, v = from_normal_tangential(c * p2, c * np.asarray(w3, float), nx, ny)
    return p.H * p1, u, v


@dataclass(frozen=True)
class CharacteristicFrame:
    """Characteristic speeds and variables at a set of boundary nodes."""

    U_n: np.ndarray
    u_n: np.ndarray
    u_s: np.ndarray
    c: float
    w1: np.ndarray
    w2: np.ndarray
    w3: np.ndarray

    @property
    def lam1(self):
        return self.U_n + self.c

    @property
    def lam2(self):
        return self.U_n - self.c

    @property
    def lam3(self):
        return self.U_n

    @classmethod
    def build(cls, h, u, v, nx, ny, p: PhysParams) -> "CharacteristicFrame":
        U_n = nx * p.U + ny * p.V
        un, us = normal_tangential(np.asarray(u, float), np.asarray(v, float), nx, ny)
        w1, w2, w3 = characteristic_transform(h, u, v, nx, ny, p)
        return cls(np.asarray(U_n, float), un, us, p.c, w1, w2, w3)


def eigenvector_matrix() -> np.ndarray:
    return np.array([[1.0, 1.0, 0.0], [1.0, -1.0, 0.0], [0.0, 0.0, SQRT2]]) / SQRT2


def bc_count(normal_velocity):
    """Number of boundary conditions required: 2 at inflow, 1 at outflow."""
    out = np.where(np.asarray(normal_velocity) < 0.0, 2, 1)
    return int(out) if out.ndim == 0 else out


# ----------------------------------------------------------------------------
# BC families

class BcKind(str, Enum):
    RIEMANN = "riemann"
    MASSFLUX = "massflux"
    BERNOULLI = "bernoulli"
    GAMMA = "gamma"
    ALPHABETA = "alphabeta"


_ALIASES = {
    "riemann": BcKind.RIEMANN,
    "massflux": BcKind.MASSFLUX,
    "mass_flux": BcKind.MASSFLUX,
    "mass-flux": BcKind.MASSFLUX,
    "bernoulli": BcKind.BERNOULLI,
}


@dataclass(frozen=True)
class BcFamily:
    kind: BcKind
    gamma: float | None = None
    alpha: float | None = None
    beta: float | None = None

    def __post_init__(self):
        if self.kind is BcKind.GAMMA and self.gamma is None:
            raise ConfigError("a raw-gamma BC needs a gamma value")
        if self.kind is BcKind.ALPHABETA:
            if self.alpha is None or self.beta is None:
                raise ConfigError("a raw alpha/beta BC needs both alpha and beta")
            if self.alpha < 0 or self.beta < 0 or self.alpha + self.beta <= 0:
                raise ConfigError(
                    f"nonlinear BC weights need alpha >= 0, beta >= 0, alpha + beta > 0; "
                    f"got alpha={self.alpha}, beta={self.beta}"
                )

    @classmethod
    def riemann(cls):
        return cls(BcKind.RIEMANN)

    @classmethod
    def mass_flux(cls):
        return cls(BcKind.MASSFLUX)

    @classmethod
    def bernoulli(cls):
        return cls(BcKind.BERNOULLI)

    @classmethod
    def raw_gamma(cls, gamma: float):
        return cls(BcKind.GAMMA, gamma=float(gamma))

    @classmethod
    def raw_alpha_beta(cls, alpha: float, beta: float):
        return cls(BcKind.ALPHABETA, alpha=float(alpha), beta=float(beta))

    @classmethod
    def parse(cls, text: str) -> "BcFamily":
        key = text.strip().lower()
        if key in _ALIASES:
            return cls(_ALIASES[key])
        raise ConfigError(f"unknown BC family {text!r}; expected riemann, massflux or bernoulli")


@dataclass(frozen=True)
class PenaltySet:
    tau_h: np.ndarray | float
    tau_n: np.ndarray | float
    tau_s: np.ndarray | float


@dataclass(frozen=True)
class PenaltyOverrides:
    """User overrides for the free penalty inequalities. None keeps the canonical value."""

    tau_h: float | None = None
    tau_n: float | None = None
    tau_s: float | None = None


DATA_SOURCES = ("farfield", "homogeneous", "mms")


@dataclass(frozen=True)
class BoundarySpec:
    """BC on one edge: family at inflow nodes, family at outflow nodes, penalties, data."""

    inflow: BcFamily = field(default_factory=BcFamily.riemann)
    outflow: BcFamily = field(default_factory=BcFamily.riemann)
    penalties: PenaltyOverrides = field(default_factory=PenaltyOverrides)
    data: str = "farfield"
    unsafe: bool = False

    def __post_init__(self):
        if self.data not in DATA_SOURCES:
            raise ConfigError(f"unknown boundary data source {self.data!r}; expected {DATA_SOURCES}")

    @classmethod
    def uniform(cls, family: BcFamily, **kw) -> "BoundarySpec":
        return cls(inflow=family, outflow=family, **kw)


def edge_specs(spec) -> dict:
    """Expand a single BoundarySpec or a per-edge mapping into all four edges."""
    names = ("west", "east", "south", "north")
    if isinstance(spec, BoundarySpec):
        return {n: spec for n in names}
    missing = [n for n in names if n not in spec]
    if missing:
        raise ConfigError(f"missing boundary specification for edges {missing}")
    return {n: spec[n] for n in names}


# ----------------------------------------------------------------------------
# linear: reflection coefficient and penalties

def resolve_linear_gamma(family: BcFamily, U_n, c: float, unsafe: bool = False):
    """Reflection coefficient gamma per node with the well-posedness check.

    Raises ConfigError where gamma^2 > -lambda1/lambda2 unless ``unsafe``.
    """
    U_n = np.asarray(U_n, dtype=float)
    lam1, lam2 = U_n + c, U_n - c
    if np.any(lam2 >= 0.0) or np.any(lam1 <= 0.0):
        raise ConfigError("linear BCs need subcritical normal flow, |U_n| < c")
    if family.kind is BcKind.RIEMANN:
        gamma = np.zeros_like(U_n)
    elif family.kind is BcKind.MASSFLUX:
        gamma = -lam1 / lam2
    elif family.kind is BcKind.BERNOULLI:
        gamma = lam1 / lam2
    elif family.kind is BcKind.GAMMA:
        gamma = np.full_like(U_n, family.gamma)
    else:
        raise ConfigError(f"BC family {family.kind.value!r} is not available for the linear model")
    bound = -lam1 / lam2
    # equality is admissible; allow a few ulps of rounding (U_n = 0 gives gamma^2 = 1 = bound)
    bad = gamma * gamma > bound * (1.0 + 1e-12)
    if np.any(bad) and not unsafe:
        k = int(np.argmax(bad))
        raise ConfigError(
            f"{family.kind.value} BC is not well posed where U_n = {U_n.flat[k]:.6g}: "
            f"gamma^2 = {gamma.flat[k] ** 2:.6g} > -lambda1/lambda2 = {bound.flat[k]:.6g} "
            f"(set unsafe_bc to override)"
        )
    return gamma if gamma.ndim else float(gamma)


def select_linear_penalties(gamma, lam2, overrides: PenaltyOverrides | None = None) -> PenaltySet:
    """tau_n = lambda2, tau_h = gamma lambda2, tau_s = 1 unless overridden (>= 1)."""
    ov = overrides or PenaltyOverrides()
    if ov.tau_h is not None or ov.tau_n is not None:
        raise ConfigError("linear tau_h and tau_n are fixed by the stability lemma and cannot be overridden")
    tau_s = 1.0 if ov.tau_s is None else float(ov.tau_s)
    if tau_s < 1.0:
        raise ConfigError(f"linear tau_s must be >= 1, got {tau_s}")
    lam2 = np.asarray(lam2, dtype=float)
    return PenaltySet(tau_h=np.asarray(gamma) * lam2, tau_n=lam2, tau_s=tau_s)


# ----------------------------------------------------------------------------
# nonlinear: weights and penalties

_warned_supercritical = False


def resolve_nonlinear_weights(family: BcFamily, h, u_n, g: float):
    """(alpha, beta) per node for alpha G_n - beta F_n = d1."""
    h = np.asarray(h, dtype=float)
    u_n = np.asarray(u_n, dtype=float)
    if np.any(~(h > 0.0)):
        k = int(np.argmax(~(h > 0.0)))
        raise PositivityError(f"boundary water height h={h.flat[k]:.6g} <= 0 at boundary node {k}")
    if family.kind is BcKind.RIEMANN:
        c = np.sqrt(g * h)
        alpha = 2.0 / c
        beta = (c + u_n) / (h * c)
        if np.any(beta <= 0.0):
            global _warned_supercritical
            if not _warned_supercritical:
                warnings.warn(
                    "supercritical inflow at a Riemann boundary node; using beta = 0 there",
                    RuntimeWarning,
                    stacklevel=2,
                )
                _warned_supercritical = True
            beta = np.maximum(beta, 0.0)
    elif family.kind is BcKind.MASSFLUX:
        alpha, beta = np.zeros_like(h), np.ones_like(h)
    elif family.kind is BcKind.BERNOULLI:
        alpha, beta = np.ones_like(h), np.zeros_like(h)
    elif family.kind is BcKind.ALPHABETA:
        alpha, beta = np.full_like(h, family.alpha), np.full_like(h, family.beta)
    else:
        raise ConfigError(f"BC family {family.kind.value!r} is not available for the nonlinear model")
    if alpha.ndim == 0:
        return float(alpha), float(beta)
    return alpha, beta


def select_nonlinear_penalties(alpha, beta, overrides: PenaltyOverrides | None = None,
                               where_free: bool = False) -> PenaltySet:
    """Penalties from the three (alpha, beta) cases, vectorized over nodes.

    An override of tau_n (tau_h) is only admissible where alpha = 0 (beta = 0).
    With ``where_free`` it is applied at those nodes and ignored elsewhere;
    otherwise any other node raises.
    """
    ov = overrides or PenaltyOverrides()
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    if np.any(alpha < 0) or np.any(beta < 0) or np.any(alpha + beta <= 0):
        raise ConfigError("nonlinear BC weights need alpha >= 0, beta >= 0, alpha + beta > 0")
    case1 = alpha == 0.0
    case2 = (beta == 0.0) & ~case1
    case3 = ~(case1 | case2)
    with np.errstate(divide="ignore"):
        tau_h = np.where(case1, -1.0 / beta, np.where(case3, -0.5 / beta, 0.0))
        tau_n = np.where(case2, 1.0 / alpha, np.where(case3, 0.5 / alpha, 0.0))
    if ov.tau_n is not None:
        if not where_free and np.any(~case1):
            raise ConfigError("tau_n is only free when alpha = 0 (mass-flux type BC)")
        if ov.tau_n < 0:
            raise ConfigError(f"tau_n must be >= 0, got {ov.tau_n}")
        tau_n = np.where(case1, ov.tau_n, tau_n)
    if ov.tau_h is not None:
        if not where_free and np.any(~case2):
            raise ConfigError("tau_h is only free when beta = 0 (Bernoulli type BC)")
        if ov.tau_h > 0:
            raise ConfigError(f"tau_h must be <= 0, got {ov.tau_h}")
        tau_h = np.where(case2, ov.tau_h, tau_h)
    tau_s = 0.5 if ov.tau_s is None else float(ov.tau_s)
    if tau_s < 0.5:
        raise ConfigError(f"nonlinear tau_s must be >= 1/2, got {tau_s}")
    if tau_h.ndim == 0:
        return PenaltySet(float(tau_h), float(tau_n), tau_s)
    return PenaltySet(tau_h, tau_n, tau_s)


def select_penalties(model: str, *, gamma=None, lam2=None, alpha=None, beta=None, overrides=None) -> PenaltySet:
    if model == "linear":
        return select_linear_penalties(gamma, lam2, overrides)
    if model == "nonlinear":
        return select_nonlinear_penalties(alpha, beta, overrides)
    raise ConfigError(f"unknown model {model!r}")


# ----------------------------------------------------------------------------
# boundary data

def remote_data(t: float, p: PhysParams):
    """Far-field state rotated by the Coriolis term: (H, U_inf, V_inf)."""
    ct, st = math.cos(p.f_c * t), math.sin(p.f_c * t)
    return p.H, p.U * ct + p.V * st, p.V * ct - p.U * st


def nonlinear_bc_operator(family: BcFamily, h, u, v, nx, ny, g: float):
    """Apply the nonlinear boundary operator: (alpha G_n - beta F_n, u_s)."""
    un, us = normal_tangential(u, v, nx, ny)
    h = np.broadcast_to(np.asarray(h, dtype=float), np.shape(un))
    alpha, beta = resolve_nonlinear_weights(family, h, un, g)
    Gn = g * h + 0.5 * un * un
    return alpha * Gn - beta * h * un, us


def linear_bc_operator(family: BcFamily, h, u, v, nx, ny, p: PhysParams, unsafe: bool = False):
    """Apply the linear boundary operator in characteristic form: (w2 - gamma w1, w3)."""
    U_n = nx * p.U + ny * p.V
    gamma = resolve_linear_gamma(family, U_n, p.c, unsafe=unsafe)
    w1, w2, w3 = characteristic_transform(h, u, v, nx, ny, p)
    return w2 - gamma * w1, w3


def linear_data_from_physical(family: BcFamily, d1_phys, d2_phys, U_n, p: PhysParams, unsafe=False):
    """Convert physical linear BC data to characteristic-space data.

    The data of the Riemann, mass-flux and Bernoulli BCs (r2, F_n, G_n) and the
    tangential velocity u_s are mapped exactly onto (w2 - gamma w1, w3).
    """
    c = p.c
    U_n = np.asarray(U_n, dtype=float)
    lam2 = U_n - c
    if family.kind is BcKind.RIEMANN:
        d1 = np.asarray(d1_phys) / (SQRT2 * c)
    elif family.kind is BcKind.MASSFLUX:
        d1 = SQRT2 * np.asarray(d1_phys) / (lam2 * p.H)
    elif family.kind is BcKind.BERNOULLI:
        d1 = -SQRT2 * np.asarray(d1_phys) / (lam2 * c)
    else:
        raise ConfigError("physical data conversion needs a named BC family")
    resolve_linear_gamma(family, U_n, c, unsafe=unsafe)
    return d1, np.asarray(d2_phys) / c


def boundary_data(family: BcFamily, model: str, t: float, nx, ny, p: PhysParams, source: str = "farfield",
                  exact=None, x=None, y=None, unsafe: bool = False):
    """Boundary data (d1, d2) for one family at a set of boundary nodes.

    ``source``: ``farfield`` uses the rotated remote state (zero perturbation for
    the linear model), ``homogeneous`` returns zeros, ``mms`` pushes
    ``exact(t, x, y) -> (h, u, v)`` through the boundary operator.
    """
    nx = np.asarray(nx, dtype=float)
    ny = np.asarray(ny, dtype=float)
    zeros = np.zeros_like(nx)
    if source == "homogeneous" or (source == "farfield" and model == "linear"):
        return zeros, zeros.copy()
    if source == "farfield":
        Hi, Ui, Vi = remote_data(t, p)
        return nonlinear_bc_operator(family, Hi + zeros, Ui + zeros, Vi + zeros, nx, ny, p.g)
    if source == "mms":
        if exact is None or x is None or y is None:
            raise ConfigError("mms boundary data needs the exact solution and node coordinates")
        he, ue, ve = exact(t, x, y)
        if model == "linear":
            return linear_bc_operator(family, he, ue, ve, nx, ny, p, unsafe=unsafe)
        return nonlinear_bc_operator(family, he, ue, ve, nx, ny, p.g)
    raise ConfigError(f"unknown boundary data source {source!r}")


# ----------------------------------------------------------------------------
# SAT building blocks and pointwise boundary terms

@dataclass(frozen=True)
class LinearSatMatrices:
    W: np.ndarray
    S: np.ndarray
    P: np.ndarray
    R: np.ndarray

    @property
    def composite(self) -> np.ndarray:
        return np.linalg.inv(self.W) @ self.R @ self.P @ self.S


def linear_sat_matrices(nx: float, ny: float, p: PhysParams) -> LinearSatMatrices:
    """Dense 3x3 matrices of the linear SAT at one boundary node (for checks)."""
    W = 0.5 * np.diag([p.g, p.H, p.H])
    P = np.diag([1.0 / p.H, 1.0 / p.c, 1.0 / p.c])
    R = np.array([[1.0, 0.0, 0.0], [0.0, nx, ny], [0.0, ny, -nx]])
    return LinearSatMatrices(W, eigenvector_matrix(), P, R)


def linear_sat_pointwise(a, b, s, nx, ny, p: PhysParams):
    """W^-1 R P S applied to (a, b, s), written out component by component."""
    c, H = p.c, p.H
    apb = (a + b) / SQRT2
    amb = (a - b) / SQRT2
    sh = 2.0 * apb / (p.g * H)
    su = 2.0 * (nx * amb + ny * s) / (c * H)
    sv = 2.0 * (ny * amb - nx * s) / (c * H)
    return sh, su, sv


def linear_boundary_term_pointwise(frame: CharacteristicFrame, gamma, pen: PenaltySet, d1=0.0, d2=0.0):
    """Pointwise boundary term of the linear scheme with SATs, in w units.

    The tangential penalty is active only at inflow (U_n < 0).
    """
    w1, w2, w3 = frame.w1, frame.w2, frame.w3
    r = w2 - gamma * w1 - d1
    bt = -(frame.lam1 * w1 ** 2 + frame.lam2 * w2 ** 2 + frame.lam3 * w3 ** 2)
    bt = bt + pen.tau_h * w1 * r + pen.tau_n * w2 * r
    inflow = frame.U_n < 0.0
    return bt + np.where(inflow, pen.tau_s * frame.U_n * w3 * (w3 - d2), 0.0)


def nonlinear_boundary_term_pointwise(h, u_n, u_s, g, alpha, beta, pen: PenaltySet, d1=0.0, d2=0.0):
    """Pointwise boundary term -G F_n + SAT contributions of the nonlinear scheme."""
    Fn = h * u_n
    Gn = g * h + 0.5 * u_n * u_n
    G = Gn + 0.5 * u_s * u_s
    r = alpha * Gn - beta * Fn - d1
    bt = -G * Fn + pen.tau_h * G * r + pen.tau_n * Fn * r
    return bt + np.where(u_n < 0.0, pen.tau_s * h * u_n * u_s * (u_s - d2), 0.0)
