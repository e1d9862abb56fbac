"""Travelling-wave measurements: front tracking, speed fit, plateaus, jump relations
and profile comparison between runs."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import numpy as np

from .core import IF, IO, IP, IN, FlowState, Mesh1D
from .errors import FrontNotEstablished, WaveNotSteady

FIELDS = ("rho", "yF", "yO", "yP", "yN", "z", "theta", "G")
_SPECIES_FIELDS = {"yF": IF, "yO": IO, "yP": IP, "yN": IN}


def field_values(state: FlowState, name: str) -> np.ndarray:
    """Cell values of a named field (``theta``, ``yF``, ``G``, ...)."""
    if name in _SPECIES_FIELDS:
        return state.y[_SPECIES_FIELDS[name]]
    if name == "G":
        if state.G is None:
            raise KeyError("state has no G field")
        return state.G
    if name in ("rho", "z", "theta"):
        return getattr(state, name)
    raise KeyError(f"unknown field {name!r}")


def crossings(x, f, level):
    """Linearly interpolated positions where ``f`` crosses ``level``."""
    d = np.asarray(f, dtype=float) - level
    idx = np.nonzero(((d[:-1] < 0) & (d[1:] >= 0)) | ((d[:-1] >= 0) & (d[1:] < 0)))[0]
    w = d[idx] / (d[idx] - d[idx + 1])
    return x[idx] + w * (x[idx + 1] - x[idx])


def front_position(state: FlowState, mesh: Mesh1D, field: str = "theta", level: float | None = None) -> float:
    """Position where ``field`` crosses ``level``.

    The default level is 0.5 for ``G`` and the midpoint of the field's extreme
    values otherwise.
    """
    f = field_values(state, field)
    if level is None:
        level = 0.5 if field == "G" else 0.5 * (float(f.min()) + float(f.max()))
    xs = crossings(mesh.centers, f, level)
    if len(xs) != 1:
        raise FrontNotEstablished(f"{field} crosses {level:g} {len(xs)} times")
    return float(xs[0])


class SpeedFit(NamedTuple):
    u_p: float
    r2: float


def wave_speed(trajectory, discard: float = 0.2, min_samples: int = 10) -> SpeedFit:
    """Least-squares slope of front position against time.

    The first ``discard`` fraction of the samples is dropped as transient.
    """
    traj = np.asarray(trajectory, dtype=float)
    if traj.ndim != 2 or traj.shape[1] != 2:
        raise ValueError("trajectory must be a sequence of (t, x) pairs")
    traj = traj[int(np.floor(discard * len(traj))):]
    if len(traj) < min_samples:
        raise ValueError(f"need at least {min_samples} samples after the transient, got {len(traj)}")
    t, x = traj[:, 0], traj[:, 1]
    A = np.vstack((t, np.ones_like(t))).T
    (slope, intercept), *_ = np.linalg.lstsq(A, x, rcond=None)
    resid = x - (slope * t + intercept)
    ss_tot = float(np.sum((x - x.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - float(np.sum(resid**2)) / ss_tot
    return SpeedFit(float(slope), r2)


@dataclass
class Plateaus:
    rho_u: float
    u_u: float
    rho_b: float
    u_b: float
    y_u: np.ndarray
    theta_u: float
    y_b: np.ndarray
    theta_b: float


def _window(x, lo, hi):
    mask = (x >= lo) & (x <= hi)
    if mask.sum() < 2:
        raise WaveNotSteady(f"no plateau cells in [{lo:.4g}, {hi:.4g}]")
    return mask


def plateau_states(state: FlowState, mesh: Mesh1D, burnt: tuple[float, float],
                   fresh: tuple[float, float], flat_tol: float = 1e-3) -> Plateaus:
    """Average states over a burnt and a fresh interval ``(x_lo, x_hi)``.

    Each window must be flat: density spread below ``flat_tol`` times its mean.
    Velocities are averaged over the faces inside the window.
    """
    x, xf = mesh.centers, mesh.faces
    burnt_faces = _window(xf, *burnt)
    fresh_faces = _window(xf, *fresh)
    burnt = _window(x, *burnt)
    fresh = _window(x, *fresh)
    for name, mask in (("burnt", burnt), ("fresh", fresh)):
        r = state.rho[mask]
        spread = (r.max() - r.min()) / r.mean()
        if spread > flat_tol:
            raise WaveNotSteady(f"{name} plateau not flat: density spread {spread:.2e}")
    return Plateaus(
        rho_u=float(state.rho[fresh].mean()),
        u_u=float(state.u[fresh_faces].mean()),
        rho_b=float(state.rho[burnt].mean()),
        u_b=float(state.u[burnt_faces].mean()),
        y_u=state.y[:, fresh].mean(axis=1),
        theta_u=float(state.theta[fresh].mean()),
        y_b=state.y[:, burnt].mean(axis=1),
        theta_b=float(state.theta[burnt].mean()),
    )


class FlameVelocity(NamedTuple):
    jump: float
    kinematic: float
    discrepancy: float


def flame_velocity_from_jump(report) -> FlameVelocity:
    """Flame velocity relative to the fresh gas from the mass jump condition.

    ``report`` needs ``u_p``, ``u_u``, ``rho_u`` and ``rho_b``.  With the burnt
    gas at rest, ``(rho_u - rho_b) u_p = rho_u u_u`` gives
    ``u_f = u_u rho_b / (rho_u - rho_b)``; ``u_p - u_u`` is the kinematic
    counterpart.  ``discrepancy`` is their difference relative to the jump value.
    """
    d = report.rho_u - report.rho_b
    if d == 0:
        raise ZeroDivisionError("no density jump across the front")
    jump = report.u_u * report.rho_b / d
    kin = report.u_p - report.u_u
    if jump == 0:
        disc = 0.0 if kin == 0 else np.inf
    else:
        disc = abs(kin - jump) / abs(jump)
    return FlameVelocity(float(jump), float(kin), float(disc))


def transition_thickness(x, f, lo: float | None = None, hi: float | None = None,
                         fractions=(0.1, 0.9)) -> float:
    """Distance between the crossings of ``lo + a (hi - lo)`` and ``lo + b (hi - lo)``.

    ``lo`` and ``hi`` default to the extreme values of ``f``.  When a level is
    crossed several times the crossing closest to the mid-level one is used.
    """
    f = np.asarray(f, dtype=float)
    lo = float(f.min()) if lo is None else lo
    hi = float(f.max()) if hi is None else hi
    mid = crossings(x, f, 0.5 * (lo + hi))
    if len(mid) == 0:
        raise FrontNotEstablished("profile has no transition")
    ref = mid[0]
    pos = []
    for a in fractions:
        xs = crossings(x, f, lo + a * (hi - lo))
        if len(xs) == 0:
            raise FrontNotEstablished(f"profile does not reach the {a:.0%} level")
        pos.append(xs[np.argmin(np.abs(xs - ref))])
    return float(abs(pos[1] - pos[0]))


class ProfileComparison(NamedTuple):
    linf: float
    l2: float
    thickness_ratio: float
    shift: float


def compare_profiles(a: FlowState, b: FlowState, field: str, mesh_a: Mesh1D,
                     mesh_b: Mesh1D | None = None, front_field: str = "theta",
                     level: float | None = None, window: float | None = None) -> ProfileComparison:
    """Pointwise distance between two travelling profiles after aligning their fronts.

    ``b`` is translated so its ``front_field`` front sits on ``a``'s, then
    linearly resampled onto ``a``'s cell centres.  Metrics use the cells where
    both profiles are defined, restricted to ``|x - front| <= window`` when
    given.  ``thickness_ratio`` is the 10-90 % transition width of ``b`` over
    that of ``a``.
    """
    mesh_b = mesh_b or mesh_a
    if level is None and front_field != "G":
        # one level for both runs, else different extremes would shift the fronts
        fa, fb = field_values(a, front_field), field_values(b, front_field)
        level = 0.5 * (min(fa.min(), fb.min()) + max(fa.max(), fb.max()))
    xa_front = front_position(a, mesh_a, front_field, level)
    xb_front = front_position(b, mesh_b, front_field, level)
    shift = xa_front - xb_front
    xa, xb = mesh_a.centers, mesh_b.centers + shift
    fa, fb = field_values(a, field), field_values(b, field)
    inside = (xa >= xb[0]) & (xa <= xb[-1])
    if window is not None:
        inside &= np.abs(xa - xa_front) <= window
    if not inside.any():
        raise FrontNotEstablished("profiles do not overlap after alignment")
    diff = fa[inside] - np.interp(xa[inside], xb, fb)
    linf = float(np.max(np.abs(diff)))
    l2 = float(np.sqrt(np.mean(diff**2)))
    ratio = transition_thickness(xb, fb) / transition_thickness(xa, fa)
    return ProfileComparison(linf, l2, float(ratio), float(shift))


@dataclass
class WaveReport:
    """Travelling-wave summary of one run."""

    model: str = ""
    times: list = field(default_factory=list)
    positions: list = field(default_factory=list)
    u_p: float = float("nan")
    fit_r2: float = float("nan")
    rho_u: float = float("nan")
    u_u: float = float("nan")
    rho_b: float = float("nan")
    u_b: float = float("nan")
    theta_u: float = float("nan")
    theta_b: float = float("nan")
    y_b: tuple = (float("nan"),) * 4
    u_f: float = float("nan")
    u_f_kinematic: float = float("nan")
    u_f_discrepancy: float = float("nan")
    thickness: float = float("nan")
    x_front: float = float("nan")
    x_front_G: float = float("nan")
    steady_linf: float = float("nan")
    steady: bool = False
    note: str = ""

    @property
    def trajectory(self):
        return list(zip(self.times, self.positions))

    def summary(self) -> dict:
        """Scalar fields in a fixed order, for the key-value and CSV outputs."""
        d = asdict(self)
        d.pop("times")
        d.pop("positions")
        y_b = d.pop("y_b")
        for name, v in zip(("yF_b", "yO_b", "yP_b", "yN_b"), y_b):
            d[name] = float(v)
        d["n_samples"] = len(self.times)
        return d


def combustion_zone_thickness(state: FlowState, mesh: Mesh1D, y_F_burnt: float, y_F_fresh: float) -> float:
    """10-90 % transition width of the fuel mass fraction between its plateaus."""
    return transition_thickness(mesh.centers, state.y[IF], y_F_burnt, y_F_fresh)


def steady_profile_gap(early: FlowState, late: FlowState, mesh: Mesh1D,
                       level: float | None = None, window: float | None = None) -> float:
    """L-infinity gap of ``y_F`` between two snapshots aligned on their ``theta`` fronts."""
    return compare_profiles(late, early, "yF", mesh, mesh, "theta", level, window).linf
