"""Run orchestration, output writers and the convergence-study harness."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from rswe_sbp.config import SimConfig
from rswe_sbp.diagnostics import EnergyRecord, MmsSolution, convergence_rates, error_l2, gaussian_ic, mms_forcing
from rswe_sbp.errors import ConfigError, NumericalError
from rswe_sbp.grid import Grid2D
from rswe_sbp.linear import LinearRSWE
from rswe_sbp.nonlinear import NonlinearRSWE
from rswe_sbp.state import FieldState
from rswe_sbp.timeint import compute_dt, integrate

log = logging.getLogger("rswe_sbp")

SNAPSHOT_HEADER = "# rswe-snapshot v1"
ENERGY_HEADER = "# rswe-energy v1"
ERROR_HEADER = "# rswe-error v1"
CONVERGENCE_HEADER = "# rswe-convergence v1"

_MODELS = {"linear": LinearRSWE, "nonlinear": NonlinearRSWE}


def _fmt(v: float) -> str:
    return f"{v:.16e}"


def snapshot_name(t: float) -> str:
    return f"snapshot_t{t:010.4f}.txt"


def snapshot_times(t_final: float, interval: float) -> list[float]:
    k = 1
    out = []
    while k * interval < t_final - 1e-12:
        out.append(k * interval)
        k += 1
    out.append(float(t_final))
    return out


def _meta(cfg: SimConfig, grid: Grid2D, t: float) -> str:
    n_q, n_r = grid.shape
    return (f"# model={cfg.model} scenario={cfg.scenario} mesh={cfg.mesh} n_q={n_q} n_r={n_r} "
            f"t={t!r}")


def write_snapshot(path: Path, cfg: SimConfig, grid: Grid2D, q: np.ndarray, t: float) -> None:
    cols = np.column_stack([grid.x.ravel(), grid.y.ravel(), q[0].ravel(), q[1].ravel(), q[2].ravel()])
    lines = [SNAPSHOT_HEADER, _meta(cfg, grid, t), "# x y h u v"]
    lines += [" ".join(_fmt(v) for v in row) for row in cols]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_energy(path: Path, cfg: SimConfig, grid: Grid2D, records: list[EnergyRecord]) -> None:
    lines = [ENERGY_HEADER, _meta(cfg, grid, records[-1].t if records else 0.0), "# t E dEdt BT"]
    lines += [" ".join(_fmt(v) for v in (r.t, r.E, r.dEdt, r.BT)) for r in records]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_error(path: Path, cfg: SimConfig, grid: Grid2D, t: float, parts: tuple) -> None:
    lines = [ERROR_HEADER, _meta(cfg, grid, t), "# t l2 l2_h l2_u l2_v",
             " ".join(_fmt(v) for v in (t,) + tuple(parts))]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_convergence(path: Path, cfg: SimConfig, rows: list[tuple]) -> None:
    lines = [CONVERGENCE_HEADER,
             f"# model={cfg.model} mesh={cfg.mesh} t_final={cfg.t_final!r} cfl={cfg.cfl!r}",
             "# n dx l2 rate"]
    for n, dx, err, rate in rows:
        lines.append(f"{n} {_fmt(dx)} {_fmt(err)} {'-' if rate is None else _fmt(rate)}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


# ----------------------------------------------------------------------------
# setup

@dataclass
class Setup:
    cfg: SimConfig
    grid: Grid2D
    model: object
    q0: np.ndarray
    exact: MmsSolution | None = None


def setup(cfg: SimConfig, n: int | None = None) -> Setup:
    """Grid, model and initial state. Every configuration problem surfaces here."""
    grid = cfg.build_grid(n)
    p = cfg.params
    bcs = cfg.boundary_specs()
    cls = _MODELS[cfg.model]
    if cfg.scenario == "mms":
        sol = MmsSolution(p.L)
        model = cls(grid, p, bcs, exact=sol, forcing=mms_forcing(cfg.model, grid, p, sol))
        return Setup(cfg, grid, model, np.stack(sol(0.0, grid.x, grid.y)), sol)
    centre = None if cfg.x0 is None else (cfg.x0, cfg.y0)
    s0 = gaussian_ic(grid.mapping, p, cfg.model, grid, centre, cfg.sigma0)
    return Setup(cfg, grid, cls(grid, p, bcs), s0.pack())


def _error_parts(st: Setup, q: np.ndarray, t: float) -> tuple:
    exact = st.exact(t, st.grid.x, st.grid.y)
    total = error_l2(FieldState.unpack(q, t), exact, st.grid)
    comps = tuple(math.sqrt(st.grid.integrate((q[k] - exact[k]) ** 2)) for k in range(3))
    return (total,) + comps


# ----------------------------------------------------------------------------
# run

@dataclass
class RunResult:
    q: np.ndarray
    t: float
    steps: int
    files: list[Path] = field(default_factory=list)
    energy: list[EnergyRecord] = field(default_factory=list)
    error: float | None = None


def simulate(st: Setup, t_final: float, stops=(), on_stop=None, energy_every: int = 0):
    """Integrate a prepared setup. Returns (q, t, steps, energy records)."""
    m, cfg = st.model, st.cfg
    dt = compute_dt(st.grid, cfg.params, cfg.cfl)
    records: list[EnergyRecord] = []
    stop_set = {float(s) for s in stops}
    last = {"step": 0, "t": 0.0}

    def record(t, q):
        dq = m.rhs(q, t)
        records.append(EnergyRecord(t, m.energy(q), m.energy_rate(q, dq), m.boundary_term_sat(q, t)))

    if energy_every:
        record(0.0, st.q0)

    def callback(step, t, q):
        last["step"], last["t"] = step, t
        if energy_every and (step % energy_every == 0 or t == t_final):
            record(t, q)
        if on_stop is not None and t in stop_set:
            on_stop(t, q)

    try:
        q, t = integrate(st.q0, 0.0, t_final, dt, m.rhs, stops=stops, callback=callback)
    except NumericalError as exc:
        wrapped = type(exc)(f"{exc} (after step {last['step']}, t={last['t']:.6g})")
        wrapped.records = records
        raise wrapped from exc
    return q, t, last["step"], records


def run(cfg: SimConfig) -> RunResult:
    """Run one simulation and write snapshots, the energy series and (MMS) the error file."""
    st = setup(cfg)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    files: list[Path] = []
    stops = snapshot_times(cfg.t_final, cfg.snapshot_interval) if cfg.t_final > 0 else []

    def on_stop(t, q):
        path = out / snapshot_name(t)
        write_snapshot(path, cfg, st.grid, q, t)
        files.append(path)
        log.info("t=%g: wrote %s", t, path.name)

    log.info("%s %s on %s %dx%d to t=%g", cfg.model, cfg.scenario, cfg.mesh, *st.grid.shape, cfg.t_final)
    try:
        q, t, steps, records = simulate(st, cfg.t_final, stops, on_stop, cfg.energy_every)
    except NumericalError as exc:
        records = getattr(exc, "records", [])
        if records:
            write_energy(out / "energy.txt", cfg, st.grid, records)
        raise
    path = out / "energy.txt"
    write_energy(path, cfg, st.grid, records)
    files.append(path)
    result = RunResult(q, t, steps, files, records)
    if st.exact is not None:
        parts = _error_parts(st, q, t)
        path = out / "error.txt"
        write_error(path, cfg, st.grid, t, parts)
        files.append(path)
        result.error = parts[0]
    return result


# ----------------------------------------------------------------------------
# convergence study

def convergence_study(cfg: SimConfig, resolutions) -> list[tuple]:
    """MMS errors at each resolution. Rows are (n, dx, l2, rate or None)."""
    if cfg.scenario != "mms":
        raise ConfigError("scenario: the convergence study needs scenario = mms")
    resolutions = [int(n) for n in resolutions]
    if any(n < 8 for n in resolutions):
        raise ConfigError(f"resolutions: every resolution must be at least 8, got {resolutions}")
    errors, spacings = [], []
    for n in resolutions:
        st = setup(cfg, n)
        q, t, _, _ = simulate(st, cfg.t_final)
        errors.append(_error_parts(st, q, t)[0])
        spacings.append(1.0 / (n - 1))
        log.info("n=%d l2=%.6e", n, errors[-1])
    rates = [None] + convergence_rates(errors, spacings)
    return list(zip(resolutions, spacings, errors, rates))
