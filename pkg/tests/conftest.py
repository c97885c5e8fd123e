import numpy as np
import pytest

from rswe_sbp.grid import build_grid, make_mesh
from rswe_sbp.state import PhysParams

MESHES = ("cartesian", "seashell", "cubedsphere")


@pytest.fixture(scope="session")
def params():
    return PhysParams()


@pytest.fixture(scope="session")
def grids():
    """One modest grid per mesh kind, shared across the session."""
    return {k: build_grid(make_mesh(k), 21) for k in MESHES}


@pytest.fixture(params=MESHES)
def grid(request, grids):
    return grids[request.param]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def smooth_state(grid, p, amp=0.1, seed=0, nonlinear=True):
    """A smooth perturbed state, optionally around the background flow."""
    r = np.random.default_rng(seed)
    a = r.uniform(-1, 1, size=(3, 4))
    x, y = grid.x / p.L, grid.y / p.L
    fields = []
    for k in range(3):
        f = a[k, 0] * np.sin(3 * x + a[k, 1]) * np.cos(2 * y + a[k, 2]) + a[k, 3] * x * y
        fields.append(amp * f)
    h, u, v = fields
    if nonlinear:
        return np.stack([p.H + h, p.U + u, p.V + v])
    return np.stack([h, u, v])


# ----------------------------------------------------------------------------
# acceptance report: one PASS/FAIL line per criterion at the end of the run

ACCEPTANCE: dict[int, list[tuple[bool, str]]] = {}


def report(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE.setdefault(criterion, []).append((bool(ok), detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        rows = ACCEPTANCE[k]
        ok = all(r[0] for r in rows)
        tr.write_line(f"{'PASS' if ok else 'FAIL'} criterion {k}: " + "; ".join(
            d if r else f"{d} [FAIL]" for r, d in rows))
