import numpy as np
import pytest

from rswe_sbp.boundary import BcFamily, BoundarySpec, PenaltyOverrides
from rswe_sbp.errors import BlowupError, ConfigError, PositivityError
from rswe_sbp.linear import LinearRSWE
from rswe_sbp.nonlinear import NonlinearRSWE, nonlinear_energy_rate, nonlinear_rhs
from rswe_sbp.state import FieldState

from conftest import MESHES, smooth_state

FAMILIES = ("riemann", "massflux", "bernoulli")


def spec(inflow, outflow="riemann", data="farfield", **kw):
    return BoundarySpec(BcFamily.parse(inflow), BcFamily.parse(outflow), data=data, **kw)


def background(grid, p):
    return np.stack([np.full(grid.shape, p.H), np.full(grid.shape, p.U), np.full(grid.shape, p.V)])


@pytest.mark.parametrize("fam", FAMILIES)
def test_free_stream(grid, params, fam):
    p = params.with_(f_c=0.0)
    m = NonlinearRSWE(grid, p, spec(fam))
    assert np.max(np.abs(m.rhs(background(grid, p), 0.0))) <= 1e-11


def test_constant_state_coriolis(grids, params):
    g = grids["cartesian"]
    m = NonlinearRSWE(g, params, spec("riemann"))
    dq = m.volume_rhs(background(g, params))
    np.testing.assert_allclose(dq[0], 0.0, atol=1e-11)
    np.testing.assert_allclose(dq[1], params.f_c * params.V, atol=1e-11)
    np.testing.assert_allclose(dq[2], -params.f_c * params.U, atol=1e-11)


def test_lake_at_rest(grid, params):
    p = params.with_(f_c=0.0, U=0.0, V=0.0)
    m = NonlinearRSWE(grid, p, spec("riemann", data="farfield"))
    q = background(grid, p)
    dq = m.rhs(q, 0.0)
    assert np.max(np.abs(dq)) <= 1e-11
    assert m.energy_rate(q, dq) == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize("kind", MESHES)
def test_no_sat_identity(grids, params, kind):
    g = grids[kind]
    m = NonlinearRSWE(g, params, spec("riemann"))
    for seed in range(4):
        q = smooth_state(g, params, amp=0.5, seed=seed)
        q[1:] += np.random.default_rng(seed).standard_normal((2,) + g.shape) * 0.2
        rate = m.energy_rate(q, m.rhs(q, 0.0, with_sat=False))
        bt = m.boundary_term(q)
        assert abs(rate - bt) <= 1e-10 * abs(bt)


@pytest.mark.parametrize("fam", FAMILIES)
def test_homogeneous_sat_rate_nonpositive(grid, params, rng, fam):
    m = NonlinearRSWE(grid, params.with_(f_c=0.0), spec(fam, data="homogeneous"))
    for _ in range(3):
        h = rng.uniform(1.0, 3.0, grid.shape)
        u, v = rng.uniform(-1.5, 1.5, (2,) + grid.shape)
        q = np.stack([h, u, v])
        rate = m.energy_rate(q, m.rhs(q, 0.0))
        assert rate <= 1e-10 * m.energy(q)
        assert rate == pytest.approx(m.boundary_term_sat(q), rel=1e-9, abs=1e-9 * m.energy(q))


def test_positivity_and_blowup(grids, params):
    g = grids["cartesian"]
    m = NonlinearRSWE(g, params, spec("riemann"))
    q = background(g, params)
    q[0, 3, 4] = -1.0
    with pytest.raises(PositivityError, match="i=3, j=4"):
        m.rhs(q, 0.0)
    q = background(g, params)
    q[1, 5, 6] = np.inf
    with np.errstate(invalid="ignore"), pytest.raises(BlowupError):
        m.rhs(q, 0.0)


def test_override_validation(grids, params):
    g = grids["cartesian"]
    with pytest.raises(ConfigError):
        NonlinearRSWE(g, params, spec("massflux", penalties=PenaltyOverrides(tau_n=-1.0)))
    with pytest.raises(ConfigError):
        NonlinearRSWE(g, params, spec("riemann", penalties=PenaltyOverrides(tau_s=0.1)))
    NonlinearRSWE(g, params, spec("massflux", penalties=PenaltyOverrides(tau_n=params.c / params.H)))


def test_linearization_matches_linear_model(grids, params):
    g = grids["seashell"]
    nl = NonlinearRSWE(g, params, spec("riemann"))
    lin = LinearRSWE(g, params, BoundarySpec(data="homogeneous"))
    d = smooth_state(g, params, amp=1.0, seed=3, nonlinear=False)
    bg = background(g, params)
    eps = 1e-5
    fd = (nl.volume_rhs(bg + eps * d) - nl.volume_rhs(bg - eps * d)) / (2 * eps)
    np.testing.assert_allclose(fd, lin.volume_rhs(d), atol=1e-6 * np.max(np.abs(fd)))


def test_functional_wrappers(grids, params):
    g = grids["cubedsphere"]
    q = smooth_state(g, params, seed=2)
    s = FieldState.unpack(q)
    out = nonlinear_rhs(s, 0.0, g, params, spec("riemann"))
    m = NonlinearRSWE(g, params, spec("riemann"))
    np.testing.assert_array_equal(out.pack(), m.rhs(q, 0.0))
    assert np.isclose(nonlinear_energy_rate(s, out, g, params), m.energy_rate(q, out.pack()), rtol=1e-13)
