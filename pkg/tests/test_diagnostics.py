import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rswe_sbp.config import SimConfig
from rswe_sbp.diagnostics import (
    MmsSolution,
    convergence_rates,
    error_l2,
    gaussian_ic,
    gaussian_profile,
    mms_exact,
    mms_source,
    total_energy,
)
from rswe_sbp.driver import Setup, setup, simulate
from rswe_sbp.errors import ConfigError
from rswe_sbp.grid import CartesianMap, SeashellMap, build_grid
from rswe_sbp.state import FieldState, PhysParams

from conftest import smooth_state

P = PhysParams()


def fd_residual(model, t, x, y, p, e=1e-5):
    """PDE residual of the exact solution by central differences."""
    f = lambda tt, xx, yy: np.array(mms_exact(tt, xx, yy, p.L))
    h, u, v = f(t, x, y)
    dt = (f(t + e, x, y) - f(t - e, x, y)) / (2 * e)
    dx = (f(t, x + e, y) - f(t, x - e, y)) / (2 * e)
    dy = (f(t, x, y + e) - f(t, x, y - e)) / (2 * e)
    if model == "nonlinear":
        om = dx[2] - dy[1] + p.f_c
        G = lambda d: u * d[1] + v * d[2] + p.g * d[0]
        return (
            dt[0] + dx[0] * u + h * dx[1] + dy[0] * v + h * dy[2],
            dt[1] - om * v + G(dx),
            dt[2] + om * u + G(dy),
        )
    om = dx[2] - dy[1]
    G = lambda d: p.U * d[1] + p.V * d[2] + p.g * d[0]
    return (
        dt[0] + p.H * (dx[1] + dy[2]) + p.U * dx[0] + p.V * dy[0],
        dt[1] - om * p.V - p.f_c * v + G(dx),
        dt[2] + om * p.U + p.f_c * u + G(dy),
    )


@settings(max_examples=50, deadline=None)
@given(t=st.floats(0, 10), x=st.floats(0, 100), y=st.floats(0, 100), model=st.sampled_from(["linear", "nonlinear"]))
def test_mms_source_matches_fd_oracle(t, x, y, model):
    ref = fd_residual(model, t, x, y, P)
    got = mms_source(model, t, x, y, P)
    np.testing.assert_allclose(got, ref, atol=1e-6)


def test_mms_examples():
    h, u, v = mms_exact(0.0, 10.0, 10.0)
    assert math.isclose(h, 1.0, abs_tol=1e-15) and math.isclose(u, 1.0) and v == 0.0
    x = np.linspace(0, 100, 7)
    assert not np.any(mms_exact(0.0, x, x[::-1])[2])
    with pytest.raises(ConfigError):
        mms_source("both", 0.0, 1.0, 1.0, P)


def test_mms_derivatives_consistent():
    sol = MmsSolution()
    d = sol.derivatives(0.3, 12.0, 47.0)
    e = 1e-6
    np.testing.assert_allclose(
        d["h_x"], (sol(0.3, 12.0 + e, 47.0)[0] - sol(0.3, 12.0 - e, 47.0)[0]) / (2 * e), atol=1e-8
    )


def test_total_energy_examples(grids):
    g = grids["cartesian"]
    one = np.ones(g.shape)
    assert math.isclose(total_energy("nonlinear", FieldState(2 * one, 0 * one, 0 * one), g, P), 196200.0, rel_tol=1e-12)
    assert total_energy("linear", FieldState(0 * one, 0 * one, 0 * one), g, P) == 0.0
    r = np.random.default_rng(1)
    s = FieldState(*r.standard_normal((3,) + g.shape))
    s2 = FieldState(2 * s.h, 2 * s.u, 2 * s.v)
    assert math.isclose(total_energy("linear", s2, g, P), 4 * total_energy("linear", s, g, P), rel_tol=1e-13)
    with pytest.raises(ConfigError):
        total_energy("other", s, g, P)


def test_gaussian_ic(grids):
    g = build_grid(CartesianMap(), 41)
    s = gaussian_ic(g.mapping, P, "nonlinear", g)
    assert math.isclose(np.max(s.h), P.H + 0.1 * P.H)  # (25, 25) is a node
    np.testing.assert_array_equal(s.u, P.U)
    lin = gaussian_ic(g.mapping, P, "linear", g)
    assert math.isclose(np.max(lin.h), 1.0) and not np.any(lin.u)
    assert gaussian_profile(55.0, 25.0, 25.0, 25.0) < 1e-40
    assert gaussian_profile(25.0, 25.0, 25.0, 25.0) == 1.0
    sh = grids["seashell"]
    s = gaussian_ic(sh.mapping, P, "nonlinear", sh, sigma0=0.5)
    assert np.max(s.h) <= P.H + 0.5
    with pytest.raises(ConfigError):
        gaussian_ic(sh.mapping, P, "linear", sh, center=(67.6, 77.6))


def test_error_norm_and_rates(grids):
    g = grids["seashell"]
    ex = mms_exact(0.5, g.x, g.y)
    assert error_l2(FieldState(*ex), ex, g) == 0.0
    shifted = FieldState(ex[0] + 1e-3, ex[1], ex[2])
    assert math.isclose(error_l2(shifted, ex, g), 1e-3 * math.sqrt(g.integrate(np.ones(g.shape))), rel_tol=1e-12)
    assert convergence_rates([1e-2, 1.25e-3], [0.1, 0.05]) == pytest.approx([3.0])
    with pytest.raises(ValueError):
        convergence_rates([1.0], [0.1, 0.2])


def _monitor_mismatch(model, cfl):
    cfg = SimConfig(model=model, scenario="gaussian", mesh="cartesian", n=31, cfl=cfl)
    base = setup(cfg)
    q0 = smooth_state(base.grid, cfg.params, amp=0.2, nonlinear=(model == "nonlinear"))
    st_ = Setup(cfg, base.grid, base.model, q0)
    _, _, _, recs = simulate(st_, 1.0, energy_every=1)
    t = np.array([r.t for r in recs])
    E = np.array([r.E for r in recs])
    dE = np.array([r.dEdt for r in recs])
    BT = np.array([r.BT for r in recs])
    # the semi-discrete rate equals the boundary term with SATs
    np.testing.assert_allclose(dE, BT, atol=1e-10 * E[0])
    c = (E[2:] - E[:-2]) / (t[2:] - t[:-2])
    return np.max(np.abs(c - dE[1:-1])), np.max(np.abs(dE))


@pytest.mark.parametrize("model", ["linear", "nonlinear"])
def test_energy_monitor_consistency(model):
    coarse, scale = _monitor_mismatch(model, 0.4)
    fine, _ = _monitor_mismatch(model, 0.2)
    assert coarse <= 0.05 * scale
    assert fine <= coarse / 3.0  # centred difference error is O(dt^2)
