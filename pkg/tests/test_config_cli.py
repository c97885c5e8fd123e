import math
import subprocess
import sys

import numpy as np
import pytest

from rswe_sbp.cli import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, main
from rswe_sbp.config import SimConfig, load_config, parse_text
from rswe_sbp.driver import (
    CONVERGENCE_HEADER,
    ENERGY_HEADER,
    ERROR_HEADER,
    SNAPSHOT_HEADER,
    convergence_study,
    snapshot_name,
    snapshot_times,
)
from rswe_sbp.errors import ConfigError


def write(tmp_path, text, name="run.cfg"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


# ----------------------------------------------------------------------------
# configuration


def test_empty_config_gives_defaults(tmp_path):
    cfg = load_config(write(tmp_path, "# nothing here\n\n"))
    p = cfg.params
    assert (p.g, p.f_c, p.H, p.L) == (9.81, 2.0, 2.0, 100.0)
    assert math.isclose(p.U, -0.5 * math.sqrt(19.62))
    assert cfg == load_config()


def test_single_line_config(tmp_path):
    cfg = load_config(write(tmp_path, "model=nonlinear scenario=gaussian mesh=seashell n=151 t_final=20"))
    assert (cfg.model, cfg.scenario, cfg.mesh, cfg.n, cfg.t_final) == ("nonlinear", "gaussian", "seashell", 151, 20.0)
    assert cfg.build_grid(21).mapping.kind == "seashell"


def test_parse_comments_and_pairs():
    raw = parse_text("n = 31  # comment\ncfl=0.3 mesh = panel\n")
    assert raw == {"n": "31", "cfl": "0.3", "mesh": "panel"}


@pytest.mark.parametrize(
    "text, match",
    [
        ("n = 21\nbogus = 3\n", r"cfg:2: unknown key 'bogus'"),
        ("n = 21\nn = 31\n", r"cfg:2: duplicate key 'n'"),
        ("model = nonlinear\nthis is not a pair\n", r"cfg:2: cannot parse"),
        ("n = many\n", r"n: expected an integer"),
        ("cfl = -1\n", r"cfl: must be positive"),
        ("U = 10\n", r"U, V: background flow is not subcritical"),
        ("mesh = torus\n", r"mesh: expected one of"),
        ("bc = dirichlet\n", r"bc: unknown BC family"),
        ("x0 = 30\n", r"x0, y0"),
        ("model = nonlinear\nbc = gamma\ngamma = 0.2\n", r"linear model only"),
        ("n = 5\n", r"at least 8"),
    ],
)
def test_config_errors(tmp_path, text, match):
    with pytest.raises(ConfigError, match=match):
        load_config(write(tmp_path, text))


def test_flags_win(tmp_path):
    path = write(tmp_path, "n = 21\nmodel = linear\n")
    cfg = load_config(path, {"n": "33", "model": None})
    assert cfg.n == 33 and cfg.model == "linear"
    with pytest.raises(ConfigError, match="unknown key"):
        load_config(path, {"colour": "blue"})


def test_unreadable_config(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "missing.cfg")
    bad = tmp_path / "bad.cfg"
    bad.write_bytes(b"n = 2\xff1\n")
    with pytest.raises(ConfigError, match="UTF-8"):
        load_config(bad)


def test_boundary_keys():
    cfg = load_config(None, {"bc": "bernoulli/riemann", "bc_north": "riemann", "tau_s": "2"})
    specs = cfg.boundary_specs()
    assert specs["west"].inflow.kind.value == "bernoulli"
    assert specs["west"].outflow.kind.value == "riemann"
    assert specs["north"].inflow.kind.value == "riemann"
    assert specs["east"].penalties.tau_s == 2.0
    cfg = load_config(None, {"model": "nonlinear", "bc": "alphabeta", "alpha": "0.5", "beta": "0.25"})
    assert cfg.boundary_specs()["south"].inflow.alpha == 0.5
    cfg = load_config(None, {"model": "nonlinear", "scenario": "gaussian"})
    assert cfg.data_source() == "farfield"
    assert load_config(None, {"scenario": "gaussian"}).data_source() == "homogeneous"
    assert load_config(None, {"mesh": "panel"}).mesh == "cubedsphere"


def test_snapshot_schedule():
    assert snapshot_times(15.0, 5.0) == [5.0, 10.0, 15.0]
    assert snapshot_times(12.0, 5.0) == [5.0, 10.0, 12.0]
    assert snapshot_name(5.0) == "snapshot_t00005.0000.txt"


# ----------------------------------------------------------------------------
# command line


def test_cli_mms_run(tmp_path, capsys):
    out = tmp_path / "mms"
    code = main(["run", "--model", "linear", "--scenario", "mms", "--mesh", "cartesian", "--n", "21",
                 "--tfinal", "10", "--out", str(out)])
    assert code == EXIT_OK
    err = (out / "error.txt").read_text().splitlines()
    assert err[0] == ERROR_HEADER
    t, l2 = map(float, err[3].split()[:2])
    assert t == 10.0 and 0 < l2 < 100.0  # J-weighted over a 100 m square
    assert (out / "energy.txt").read_text().startswith(ENERGY_HEADER)
    snap = (out / "snapshot_t00010.0000.txt").read_text().splitlines()
    assert snap[0] == SNAPSHOT_HEADER and snap[2] == "# x y h u v"
    assert len(snap) == 3 + 21 * 21
    assert "l2 error" in capsys.readouterr().out


def test_cli_config_error_writes_nothing(tmp_path, capsys):
    out = tmp_path / "never"
    assert main(["run", "--mesh", "bogus", "--out", str(out)]) == EXIT_CONFIG
    assert not out.exists()
    assert "configuration error" in capsys.readouterr().err
    assert main(["run", "--set", "nokey", "--out", str(out)]) == EXIT_CONFIG
    assert main(["run", "--config", str(tmp_path / "nope.cfg")]) == EXIT_CONFIG
    # ill-posed linear outflow BC is caught at setup
    assert main(["run", "--bc", "massflux", "--out", str(out)]) == EXIT_CONFIG
    assert "not well posed" in capsys.readouterr().err
    assert not out.exists()


def test_cli_numerical_failure(tmp_path, capsys):
    out = tmp_path / "neg"
    code = main(["run", "--model", "nonlinear", "--scenario", "gaussian", "--n", "21", "--set", "sigma0=-3",
                 "--out", str(out)])
    assert code == EXIT_NUMERICAL
    assert "numerical failure" in capsys.readouterr().err


def test_gaussian_snapshots_cubedsphere(tmp_path):
    out = tmp_path / "panel"
    cfg = write(tmp_path, "model = nonlinear\nscenario = gaussian\nmesh = cubedsphere\nn = 151\n")
    assert main(["run", "--config", str(cfg), "--tfinal", "15", "--out", str(out)]) == EXIT_OK
    for t in (5, 10, 15):
        path = out / snapshot_name(float(t))
        assert path.exists()
        data = np.loadtxt(path)
        assert data.shape == (151 * 151, 5)
        assert np.all(np.isfinite(data)) and np.all(data[:, 2] > 0)
    E = np.loadtxt(out / "energy.txt")
    assert E[0, 0] == 0.0 and E[-1, 0] == 15.0


def test_reruns_bitwise_identical(tmp_path):
    args = ["run", "--model", "nonlinear", "--scenario", "gaussian", "--mesh", "seashell", "--n", "31",
            "--tfinal", "2", "--set", "snapshot_interval=1"]
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(args + ["--out", str(a)]) == EXIT_OK
    assert main(args + ["--out", str(b)]) == EXIT_OK
    names = sorted(p.name for p in a.iterdir())
    assert names == sorted(p.name for p in b.iterdir())
    assert len(names) == 3
    for n in names:
        assert (a / n).read_bytes() == (b / n).read_bytes()
        assert (a / n).read_text().startswith("# rswe-")


def test_converge_command(tmp_path, capsys):
    out = tmp_path / "conv"
    code = main(["converge", "--model", "nonlinear", "--mesh", "cartesian", "--tfinal", "1",
                 "--resolutions", "21,41", "--out", str(out)])
    assert code == EXIT_OK
    lines = (out / "convergence.txt").read_text().splitlines()
    assert lines[0] == CONVERGENCE_HEADER
    assert lines[3].split()[-1] == "-"
    assert float(lines[4].split()[-1]) > 2.0
    assert main(["converge", "--scenario", "gaussian", "--out", str(out)]) == EXIT_CONFIG


def test_single_resolution_table():
    rows = convergence_study(SimConfig(t_final=0.5), [21])
    assert len(rows) == 1 and rows[0][3] is None and rows[0][1] == 0.05


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "rswe_sbp", "run", "--mesh", "nowhere"], capture_output=True,
                         text=True, cwd=tmp_path)
    assert res.returncode == EXIT_CONFIG
