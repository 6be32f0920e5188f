import math

import pytest

import pycohesive as pc


def test_potentials():
    proto = pc.Potential.prototype(1.0)
    assert proto.f(0.5) == pytest.approx(1.0)
    assert proto.ell == 1.0
    assert pc.Potential.dugdale(proto, 4.0).f(0.5) == pytest.approx(2.0)
    assert pc.eval_fk(proto, 0.01, 0.5) == pytest.approx(0.1)
    assert pc.fk_breakpoint(proto, 0.04) == pytest.approx(1 / 1.2)
    assert "prototype" in repr(proto)
    with pytest.raises(ValueError):
        proto.f(1.0)


def test_h():
    assert pc.eval_h(1.0, 0.3) == pytest.approx(0.09)
    assert pc.eval_h(1.0, 2.0) == pytest.approx(1.75)


def test_cell_solver_and_oracle_agree():
    proto = pc.Potential.prototype(1.0)
    r = pc.ghat(proto, 1.0)
    assert r.ok
    assert r.value <= 0.75
    geo = pc.geodesic_g(proto, 1.0, n=128)
    assert geo["value"] <= geo["grid_value"]
    assert abs(r.value - geo["value"]) / geo["value"] < 0.02
    assert geo["path"][0] == [0.0, 1.0]


def test_density_table():
    s, g = pc.density_table(pc.Potential.prototype(1.0), [0.0, 0.5, 1.0])
    assert s == [0.0, 0.5, 1.0]
    assert g[0] == 0.0
    assert g[1] < g[2] <= 1.0


def test_bar():
    out = pc.minimize_bar(pc.Potential.prototype(1.0), 0.05, 0.0)
    assert out["energy"] == 0.0
    assert max(abs(1 - v) for v in out["v"]) <= 1e-8
    out = pc.minimize_bar(pc.Potential.prototype(1.0), 0.05, 2.0)
    assert out["energy"] < 1.0


def test_run_command(tmp_path):
    code = pc.run_command("fk-plot", "[fk]\neps = 0.04\npoints = 5\n", str(tmp_path))
    assert code == 0
    text = (tmp_path / "fk.csv").read_text()
    assert "breakpoint" in text
    with pytest.raises(ValueError):
        pc.run_command("fk-plot", "[fk]\ncolour = red\n", str(tmp_path))
