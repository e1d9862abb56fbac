import numpy as np
import pytest

from dustflame.core import (
    IF, IN, IO, FlowState, Mesh1D, SimulationConfig, SpeciesTable, initial_state, make_uniform_mesh,
)
from dustflame.errors import ConfigError


def test_species_defaults():
    sp = SpeciesTable()
    np.testing.assert_allclose(sp.stoich_mass, [-0.02, -0.02, 0.04, 0.0])
    assert sp.s == 1.0


def test_species_rejects_mass_imbalance():
    with pytest.raises(ConfigError, match="conserve mass"):
        SpeciesTable(nu_P=3.0)


def test_species_rejects_nonpositive_cp():
    with pytest.raises(ConfigError):
        SpeciesTable(cp=(1.0, 0.0, 1.0, 1.0))


def test_uniform_mesh_geometry():
    m = make_uniform_mesh(0.0, 1.0, 4)
    np.testing.assert_allclose(m.h, 0.25)
    np.testing.assert_allclose(m.centers, [0.125, 0.375, 0.625, 0.875])
    np.testing.assert_allclose(m.center_distance, 0.25)
    assert m.face_cells(0) == (None, 0)
    assert m.face_cells(4) == (3, None)
    assert m.face_cells(2) == (1, 2)


def test_mesh_is_read_only():
    m = make_uniform_mesh(0.0, 1.0, 4)
    with pytest.raises(ValueError):
        m.faces[0] = 1.0


@pytest.mark.parametrize("faces", [[0, 1, 2], [0, 1, 1, 2]])
def test_mesh_rejects_bad_faces(faces):
    with pytest.raises(ConfigError):
        Mesh1D(np.array(faces, dtype=float))


@pytest.mark.parametrize("kw", [
    {"dt": -1.0}, {"model": "foo"}, {"y0": (0.5, 0.5, 0.5, 0.0)}, {"theta0": 0.0},
    {"model": "flame-velocity", "delta": 0.0}, {"snapshot_every": 0}, {"ignition_cells": 10**6},
])
def test_config_validation(kw):
    with pytest.raises(ConfigError):
        SimulationConfig(**kw)


def test_n_steps_rounds():
    assert SimulationConfig(dt=2e-4, t_end=0.1).n_steps == 500


def test_initial_state_primitive():
    cfg = SimulationConfig(n_cells=16, ignition_cells=3)
    s = initial_state(cfg)
    assert np.all(s.theta[:3] == cfg.ignition_theta) and np.all(s.theta[3:] == cfg.theta0)
    assert s.G is None
    np.testing.assert_allclose(s.z, 0.5)
    np.testing.assert_array_equal(s.rho, s.rho_prev)
    assert s.violations() == []


def test_initial_state_flame_velocity():
    cfg = SimulationConfig(model="flame-velocity", n_cells=16, ignition_cells=2)
    s = initial_state(cfg)
    np.testing.assert_array_equal(s.G, [0, 0] + [1] * 14)
    assert np.all(s.theta == cfg.theta0)


def test_violations_detects_problems():
    s = initial_state(SimulationConfig(n_cells=8))
    bad = s.copy()
    bad.y[IF, 0] = -0.1
    bad.theta[1] = -1.0
    msgs = bad.violations()
    assert any("outside" in m for m in msgs) and any("temperature" in m for m in msgs)
    assert s.violations() == []


def test_copy_is_deep():
    s = initial_state(SimulationConfig(n_cells=8))
    c = s.copy()
    c.y[IN, 0] = 0.0
    c.rho[0] = 9.0
    assert s.y[IN, 0] == 0.2 and s.rho[0] != 9.0


def test_flowstate_n_cells():
    s = initial_state(SimulationConfig(n_cells=8))
    assert isinstance(s, FlowState) and s.n_cells == 8 and s.u.size == 9 and s.y[IO].size == 8
