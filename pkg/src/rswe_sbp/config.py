"""Flat ``key = value`` run configuration with command-line overrides."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from rswe_sbp.boundary import BcFamily, BcKind, BoundarySpec, PenaltyOverrides
from rswe_sbp.errors import ConfigError
from rswe_sbp.grid import MESH_KINDS, Grid2D, build_grid, make_mesh
from rswe_sbp.state import PhysParams

MODELS = ("linear", "nonlinear")
SCENARIOS = ("mms", "gaussian")
EDGES = ("west", "east", "south", "north")
BC_DATA = ("auto", "farfield", "homogeneous")

_PAIR = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*([^\s=]+)\s*")


def _float(key, text):
    try:
        v = float(text)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {text!r}") from None
    if not math.isfinite(v):
        raise ConfigError(f"{key}: value must be finite, got {text!r}")
    return v


def _int(key, text):
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {text!r}") from None


def _bool(key, text):
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {text!r}")


def _choice(options):
    def conv(key, text):
        t = text.strip().lower()
        if t not in options:
            raise ConfigError(f"{key}: expected one of {', '.join(options)}, got {text!r}")
        return t
    return conv


def _opt_float(key, text):
    return None if text.strip().lower() in ("none", "default") else _float(key, text)


def _opt_int(key, text):
    return None if text.strip().lower() in ("none", "default") else _int(key, text)


def _str(key, text):
    return text


@dataclass(frozen=True)
class SimConfig:
    model: str = "linear"
    scenario: str = "mms"
    mesh: str = "cartesian"
    n: int = 41
    n_r: int | None = None
    # boundary conditions: "family" or "inflow/outflow", globally or per edge
    bc: str = "riemann"
    bc_west: str | None = None
    bc_east: str | None = None
    bc_south: str | None = None
    bc_north: str | None = None
    bc_data: str = "auto"
    gamma: float | None = None
    alpha: float | None = None
    beta: float | None = None
    tau_h: float | None = None
    tau_n: float | None = None
    tau_s: float | None = None
    unsafe: bool = False
    # physics
    g: float = 9.81
    f_c: float = 2.0
    H: float = 2.0
    U: float | None = None
    V: float | None = None
    L: float = 100.0
    # mesh parameters
    shell_theta1: float | None = None
    shell_b: float | None = None
    shell_c1: float | None = None
    shell_c2: float | None = None
    shell_xc: float | None = None
    shell_yc: float | None = None
    panel_scale: float | None = None
    # Gaussian scenario
    sigma0: float | None = None
    x0: float | None = None
    y0: float | None = None
    # time stepping and output
    cfl: float = 0.5
    t_final: float = 10.0
    out: str = "out"
    snapshot_interval: float = 5.0
    energy_every: int = 10
    resolutions: str = "21,41,81,161"

    # -- derived objects -----------------------------------------------------
    @property
    def params(self) -> PhysParams:
        return PhysParams(g=self.g, f_c=self.f_c, H=self.H, U=self.U, V=self.V, L=self.L)

    def mesh_params(self) -> dict:
        if self.mesh == "seashell":
            names = {"theta1": self.shell_theta1, "b": self.shell_b, "c1": self.shell_c1,
                     "c2": self.shell_c2, "xc": self.shell_xc, "yc": self.shell_yc}
        elif self.mesh == "cubedsphere":
            names = {"scale": self.panel_scale}
        else:
            names = {}
        return {k: v for k, v in names.items() if v is not None}

    def mapping(self):
        return make_mesh(self.mesh, self.L, **self.mesh_params())

    def build_grid(self, n: int | None = None) -> Grid2D:
        n_q = self.n if n is None else n
        n_r = (self.n_r or self.n) if n is None else n
        return build_grid(self.mapping(), n_q, n_r)

    def data_source(self) -> str:
        if self.scenario == "mms":
            return "mms"
        if self.bc_data == "auto":
            return "homogeneous" if self.model == "linear" else "farfield"
        return self.bc_data

    def _family(self, name: str) -> BcFamily:
        key = name.strip().lower()
        if key == "gamma":
            if self.gamma is None:
                raise ConfigError("bc: family 'gamma' needs the key gamma")
            return BcFamily.raw_gamma(self.gamma)
        if key in ("alphabeta", "alpha_beta"):
            if self.alpha is None or self.beta is None:
                raise ConfigError("bc: family 'alphabeta' needs the keys alpha and beta")
            return BcFamily.raw_alpha_beta(self.alpha, self.beta)
        return BcFamily.parse(key)

    def _edge_spec(self, text: str, key: str) -> BoundarySpec:
        parts = text.split("/")
        if len(parts) > 2 or not all(parts):
            raise ConfigError(f"{key}: expected 'family' or 'inflow/outflow', got {text!r}")
        try:
            inflow = self._family(parts[0])
            outflow = self._family(parts[-1])
        except ConfigError as exc:
            raise ConfigError(f"{key}: {exc}") from None
        if self.model == "linear" and BcKind.ALPHABETA in (inflow.kind, outflow.kind):
            raise ConfigError(f"{key}: alpha/beta weights apply to the nonlinear model only")
        if self.model == "nonlinear" and BcKind.GAMMA in (inflow.kind, outflow.kind):
            raise ConfigError(f"{key}: a raw gamma applies to the linear model only")
        pen = PenaltyOverrides(self.tau_h, self.tau_n, self.tau_s)
        return BoundarySpec(inflow, outflow, pen, data=self.data_source(), unsafe=self.unsafe)

    def boundary_specs(self) -> dict:
        out = {}
        for e in EDGES:
            local = getattr(self, f"bc_{e}")
            key = f"bc_{e}" if local is not None else "bc"
            out[e] = self._edge_spec(local if local is not None else self.bc, key)
        return out

    def resolution_list(self) -> list[int]:
        try:
            res = [int(s) for s in self.resolutions.split(",") if s.strip()]
        except ValueError:
            raise ConfigError(f"resolutions: expected comma-separated integers, got {self.resolutions!r}") from None
        if not res:
            raise ConfigError("resolutions: at least one resolution is needed")
        return res

    def with_(self, **kw) -> "SimConfig":
        return replace(self, **kw)


_CONVERTERS = {
    "model": _choice(MODELS),
    "scenario": _choice(SCENARIOS),
    "mesh": _choice(MESH_KINDS + ("panel",)),
    "n": _int,
    "n_r": _opt_int,
    "bc_data": _choice(BC_DATA),
    "unsafe": _bool,
    "energy_every": _int,
    "out": _str,
    "bc": _str,
    "resolutions": _str,
}
for _f in fields(SimConfig):
    if _f.name in _CONVERTERS:
        continue
    if _f.name.startswith("bc_"):
        _CONVERTERS[_f.name] = _str
    elif _f.default is None:
        _CONVERTERS[_f.name] = _opt_float
    else:
        _CONVERTERS[_f.name] = _float

KEYS = tuple(f.name for f in fields(SimConfig))


def parse_text(text: str, source: str = "<config>") -> dict:
    """Parse ``key = value`` lines (several pairs per line allowed) into raw strings."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        pos, pairs = 0, []
        while pos < len(body):
            m = _PAIR.match(body, pos)
            if m is None:
                raise ConfigError(f"{source}:{lineno}: cannot parse {body[pos:]!r}; expected key = value")
            pairs.append((m.group(1), m.group(2)))
            pos = m.end()
        for key, value in pairs:
            if key not in KEYS:
                raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
            if key in raw:
                raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
            raw[key] = value
    return raw


def convert(raw: dict) -> dict:
    out = {}
    for key, value in raw.items():
        if key not in _CONVERTERS:
            raise ConfigError(f"unknown key {key!r}")
        out[key] = _CONVERTERS[key](key, str(value))
    return out


def validate(cfg: SimConfig) -> SimConfig:
    """Cheap checks that do not need a grid."""
    if cfg.mesh == "panel":
        cfg = cfg.with_(mesh="cubedsphere")
    if cfg.n < 8 or (cfg.n_r is not None and cfg.n_r < 8):
        raise ConfigError(f"n: resolution must be at least 8, got {cfg.n}")
    if not cfg.cfl > 0:
        raise ConfigError(f"cfl: must be positive, got {cfg.cfl}")
    if not cfg.t_final >= 0:
        raise ConfigError(f"t_final: must be non-negative, got {cfg.t_final}")
    if not cfg.snapshot_interval > 0:
        raise ConfigError(f"snapshot_interval: must be positive, got {cfg.snapshot_interval}")
    if cfg.energy_every < 1:
        raise ConfigError(f"energy_every: must be at least 1, got {cfg.energy_every}")
    if (cfg.x0 is None) != (cfg.y0 is None):
        raise ConfigError("x0, y0: give both coordinates of the Gaussian centre or neither")
    p = cfg.params
    try:
        p.check_subcritical()
    except ConfigError as exc:
        raise ConfigError(f"U, V: {exc}") from None
    cfg.resolution_list()
    cfg.boundary_specs()
    return cfg


def load_config(path: str | Path | None = None, overrides: dict | None = None) -> SimConfig:
    """Read a config file (optional), apply ``overrides`` (flags win) and validate."""
    raw: dict = {}
    if path is not None:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config file {str(path)!r}: {exc.strerror}") from None
        except UnicodeDecodeError:
            raise ConfigError(f"config file {str(path)!r} is not valid UTF-8") from None
        raw = parse_text(text, str(path))
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r}")
        raw[key] = str(value)
    return validate(SimConfig(**convert(raw)))
