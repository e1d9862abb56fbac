import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dustflame.core import IF, SimulationConfig, initial_state, make_uniform_mesh
from dustflame.diagnostics import (
    WaveReport,
    compare_profiles,
    crossings,
    flame_velocity_from_jump,
    front_position,
    plateau_states,
    transition_thickness,
    wave_speed,
)
from dustflame.errors import FrontNotEstablished, WaveNotSteady

MESH = make_uniform_mesh(0.0, 0.1, 400)


def _wave(xf, width=0.002, mesh=MESH):
    """Synthetic burnt-left / fresh-right state with a tanh front at ``xf``."""
    s = initial_state(SimulationConfig(n_cells=mesh.n_cells, x_right=mesh.x_right, ignition_cells=0))
    fresh = 0.5 * (1 + np.tanh((mesh.centers - xf) / width))
    s.theta = 878.9 + (300.0 - 878.9) * fresh
    s.y[IF] = 0.4 * fresh
    s.y[1] = 0.4 * fresh
    s.y[2] = 0.8 * (1 - fresh)
    s.rho = 0.2773 + (1.3468 - 0.2773) * fresh
    s.u = np.full(mesh.n_cells + 1, 0.05)
    s.u[: np.searchsorted(mesh.faces, xf)] = 0.0
    return s


def test_crossings_interpolates():
    x = np.array([0.0, 1.0, 2.0, 3.0])
    np.testing.assert_allclose(crossings(x, np.array([0.0, 1.0, 0.0, 1.0]), 0.5), [0.5, 1.5, 2.5])


def test_front_position_of_tanh():
    assert front_position(_wave(0.04), MESH, "theta", 0.5 * (300 + 878.9)) == pytest.approx(0.04, abs=1e-6)


def test_front_position_requires_single_crossing():
    s = _wave(0.04)
    s.theta[:] = 300.0
    with pytest.raises(FrontNotEstablished):
        front_position(s, MESH, "theta", 500.0)


def test_front_position_on_G():
    s = _wave(0.03)
    s.G = s.y[IF] / 0.4
    assert front_position(s, MESH, "G") == pytest.approx(0.03, abs=1e-6)


def test_wave_speed_exact_line():
    t = np.linspace(0, 1, 50)
    fit = wave_speed(np.c_[t, 0.01 + 0.07 * t])
    assert fit.u_p == pytest.approx(0.07) and fit.r2 == pytest.approx(1.0)


def test_wave_speed_discards_transient():
    t = np.linspace(0, 1, 100)
    x = np.where(t < 0.2, 5.0 * t, 1.0 + 0.1 * (t - 0.2))
    assert wave_speed(np.c_[t, x], discard=0.2).u_p == pytest.approx(0.1, rel=1e-6)


def test_wave_speed_needs_samples():
    with pytest.raises(ValueError):
        wave_speed([(0.0, 0.0), (1.0, 1.0)])


def test_jump_condition_oracle():
    rep = WaveReport(u_p=0.07, u_u=0.05, rho_u=1.4, rho_b=0.28)
    fv = flame_velocity_from_jump(rep)
    assert fv.jump == pytest.approx(0.05 * 0.28 / 1.12)
    assert fv.kinematic == pytest.approx(0.02)
    assert fv.discrepancy == pytest.approx(abs(0.02 - 0.0125) / 0.0125)


def test_jump_condition_consistent_wave():
    rho_u, rho_b, u_f = 1.3, 0.3, 0.013
    u_u = u_f * (rho_u - rho_b) / rho_b
    fv = flame_velocity_from_jump(WaveReport(u_p=u_u + u_f, u_u=u_u, rho_u=rho_u, rho_b=rho_b))
    assert fv.jump == pytest.approx(u_f) and fv.discrepancy < 1e-12


def test_jump_condition_no_density_jump():
    with pytest.raises(ZeroDivisionError):
        flame_velocity_from_jump(WaveReport(u_p=0.1, u_u=0.0, rho_u=1.0, rho_b=1.0))


def test_plateaus():
    s = _wave(0.05)
    p = plateau_states(s, MESH, (0.01, 0.03), (0.07, 0.1))
    assert p.rho_u == pytest.approx(1.3468, rel=1e-6) and p.rho_b == pytest.approx(0.2773, rel=1e-6)
    assert p.u_u == pytest.approx(0.05) and p.u_b == 0.0
    assert p.y_b[IF] < 1e-6


def test_plateau_not_flat():
    with pytest.raises(WaveNotSteady):
        plateau_states(_wave(0.05), MESH, (0.04, 0.05), (0.07, 0.1))


def test_transition_thickness_of_tanh():
    # 10-90 % width of 0.5 (1 + tanh(x / w)) is 2 w artanh(0.8)
    x = np.linspace(-0.01, 0.01, 20001)
    w = 0.001
    assert transition_thickness(x, 0.5 * (1 + np.tanh(x / w))) == pytest.approx(2 * w * np.arctanh(0.8), rel=1e-6)


def test_compare_self_is_zero():
    s = _wave(0.05)
    m = compare_profiles(s, s, "yF", MESH)
    assert m.linf == 0.0 and m.l2 == 0.0 and m.thickness_ratio == 1.0 and m.shift == 0.0


@given(st.floats(0.03, 0.07), st.floats(0.03, 0.07))
def test_compare_aligns_translated_profiles(xa, xb):
    m = compare_profiles(_wave(xa), _wave(xb), "theta", MESH, window=0.02)
    assert m.shift == pytest.approx(xa - xb, abs=1e-6)
    assert m.linf / 578.9 < 2e-3
    assert m.thickness_ratio == pytest.approx(1.0, rel=1e-2)


def test_compare_symmetric():
    a, b = _wave(0.05, 0.002), _wave(0.05, 0.004)
    ab = compare_profiles(a, b, "yF", MESH, window=0.03)
    ba = compare_profiles(b, a, "yF", MESH, window=0.03)
    assert ab.linf == pytest.approx(ba.linf, rel=1e-2)
    assert ab.thickness_ratio == pytest.approx(2.0, rel=2e-2)
    assert ab.thickness_ratio * ba.thickness_ratio == pytest.approx(1.0)


def test_compare_translation_invariant():
    a, b = _wave(0.04, 0.002), _wave(0.045, 0.003)
    a2, b2 = _wave(0.05, 0.002), _wave(0.055, 0.003)
    m1 = compare_profiles(a, b, "yF", MESH, window=0.02)
    m2 = compare_profiles(a2, b2, "yF", MESH, window=0.02)
    assert m1.linf == pytest.approx(m2.linf, abs=2e-3)


def test_compare_different_meshes():
    fine = make_uniform_mesh(0.0, 0.1, 800)
    m = compare_profiles(_wave(0.05), _wave(0.05, mesh=fine), "yF", MESH, fine, window=0.03)
    assert m.linf < 1e-3


def test_report_summary_is_flat():
    rep = WaveReport(model="primitive", times=[0.0, 1.0], positions=[0.0, 0.1], y_b=(0.0, 0.0, 0.8, 0.2))
    d = rep.summary()
    assert d["yP_b"] == 0.8 and d["n_samples"] == 2
    assert "times" not in d and "positions" not in d
    assert rep.trajectory == [(0.0, 0.0), (1.0, 0.1)]
