"""Flame-velocity model: transport of the colour function G and the G-gated reaction.

``G`` is 0 in burnt gas and 1 in fresh gas; the front is its 0.5 level.  The
propagation term ``rho_u u_f |grad G|`` is written as
``div(G N) - G div(N)`` with ``N`` the sign of the face gradient of ``G^n``, so
it is a convection operator with face fluxes ``rho_u u_f N``.  Both it and the
material convection ``div(rho G u)`` are explicit with a minmod-limited MUSCL
reconstruction; the time derivative keeps the ``rho^n G^{n+1} - rho^{n-1} G^n``
pairing of the species equations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import IF, IO, FlowState, Mesh1D, SpeciesTable
from .errors import CFLError, ConfigError
from .primitive import (
    StepContext,
    _check_fraction,
    _finish,
    _solve,
    chemistry_step,
    energy_step,
    face_mass_flux,
    linearized_rate,
    transport_system,
)

NORMAL_DEADZONE = 1e-14


@dataclass(frozen=True)
class GFieldParams:
    u_f: float
    delta: float
    rho_u: float

    def __post_init__(self):
        if self.u_f < 0 or not self.delta > 0 or not self.rho_u > 0:
            raise ConfigError(f"invalid flame-velocity parameters {self}")

    @classmethod
    def from_context(cls, ctx: StepContext) -> GFieldParams:
        cfg = ctx.cfg
        rho_u = cfg.rho_u if cfg.rho_u is not None else ctx.inflow.rho
        return cls(cfg.u_f, cfg.delta, rho_u)


def g_reaction_rate(G, y_F, y_O, params: GFieldParams, species: SpeciesTable):
    """Reaction rate ``(u_f/delta) * eta * (G - 0.5)^-``, with ``eta`` the limiting reactant in moles."""
    nuW = -species.stoich_mass
    eta = np.minimum(np.asarray(y_F) / nuW[IF], np.asarray(y_O) / nuW[IO])
    gate = np.maximum(0.5 - np.asarray(G, dtype=float), 0.0)
    return params.u_f / params.delta * eta * gate


def g_coefficients(params: GFieldParams, G_new):
    """Closure for :func:`chemistry_step` using the gated rate at ``G^{n+1}``.

    The active branch of the minimum is fixed by ``z^{n+1}``, so the rate is
    exactly linear in ``y_F^{n+1}``.
    """

    def coefficients(state: FlowState, z_new, ctx: StepContext):
        nuW_F = -ctx.species.stoich_mass[IF]
        gate = params.u_f / params.delta * np.maximum(0.5 - G_new, 0.0)
        # gate * min(y_F / nuW_F, y_O / nuW_O) == (gate / nuW_F) * min(y_F, y_O / s)
        return linearized_rate(gate / nuW_F, 1.0 / ctx.species.s, 1.0, z_new, ctx.species)

    return coefficients


def front_normal(G, deadzone=NORMAL_DEADZONE):
    """Per-face sign of the gradient of ``G``; zero on boundary faces and in flat regions."""
    dG = np.diff(G)
    N = np.zeros(G.size + 1)
    N[1:-1] = np.where(dG > deadzone, 1.0, np.where(dG < -deadzone, -1.0, 0.0))
    return N


def minmod(a, b):
    return np.where(a * b > 0, np.sign(a) * np.minimum(np.abs(a), np.abs(b)), 0.0)


def muscl_face_values(G, flux, mesh: Mesh1D, G_in: float):
    """Upwind face values of ``G`` from minmod-limited linear reconstructions."""
    x = mesh.centers
    slope = np.zeros_like(G)
    slope[1:-1] = minmod(
        (G[1:-1] - G[:-2]) / (x[1:-1] - x[:-2]), (G[2:] - G[1:-1]) / (x[2:] - x[1:-1])
    )
    half = 0.5 * slope * mesh.h
    from_left = np.concatenate(([G_in], G + half))
    from_right = np.concatenate((G - half, [G_in]))
    return np.where(flux >= 0, from_left, from_right)


def explicit_cfl(flux, prop, rho, mesh: Mesh1D, dt):
    """Largest ``dt (|F_l| + |F_r| + |P_l| + |P_r|) / (h rho)``; monotone when at most 1.

    ``prop`` holds the face propagation fluxes ``rho_u u_f N`` (zeros when the
    propagation term is implicit).
    """
    total = np.abs(flux[:-1]) + np.abs(flux[1:]) + np.abs(prop[:-1]) + np.abs(prop[1:])
    return float(np.max(dt * total / (mesh.h * rho)))


def g_transport_step(state: FlowState, params: GFieldParams, ctx: StepContext,
                     convection: str = "muscl", propagation: str = "muscl"):
    """``G^{n+1}`` from the discrete G-equation.

    Both the material convection and the propagation term are explicit MUSCL
    by default.  Either can be switched to ``"implicit"`` first-order
    upwinding; with ``convection="implicit"`` and ``u_f = 0`` the step is the
    species transport operator applied to ``G``.
    """
    mesh, dt = ctx.mesh, ctx.dt
    G = state.G
    h = mesh.h
    flux = face_mass_flux(state.u, state.rho, ctx.inflow.rho)
    prop = params.rho_u * params.u_f * front_normal(G)
    for name, value in (("convection", convection), ("propagation", propagation)):
        if value not in ("muscl", "implicit"):
            raise ValueError(f"unknown {name} scheme {value!r}")

    cfl = explicit_cfl(
        flux if convection == "muscl" else 0 * flux,
        prop if propagation == "muscl" else 0 * prop,
        state.rho, mesh, dt,
    )
    if cfl > 1.0:
        raise CFLError(cfl, step=state.step)

    rhs = state.rho_prev * h / dt * G
    if convection == "muscl":
        G_face = muscl_face_values(G, flux, mesh, ctx.inflow.G)
        rhs -= flux[1:] * G_face[1:] - flux[:-1] * G_face[:-1]
        lower = np.zeros_like(G)
        upper = np.zeros_like(G)
        diag = state.rho * h / dt
    else:
        lower, diag, upper, in_l, in_r = transport_system(mesh, flux, state.rho, dt)
        rhs[0] += in_l * ctx.inflow.G
        rhs[-1] += in_r * ctx.inflow.G

    # N . grad G = div(G N) - G div N; boundary faces carry N = 0
    if propagation == "muscl":
        G_face = muscl_face_values(G, prop, mesh, ctx.inflow.G)
        rhs -= prop[1:] * G_face[1:] - prop[:-1] * G_face[:-1] - G * (prop[1:] - prop[:-1])
    else:
        a_l = np.maximum(prop[:-1], 0.0)
        a_r = np.maximum(-prop[1:], 0.0)
        diag = diag + a_l + a_r
        lower = lower - a_l
        upper = upper - a_r

    G_new = _solve(lower, diag, upper, rhs, "G transport", state.step)
    return _check_fraction(G_new, "G", state.step)


def advance_gfield(state: FlowState, ctx: StepContext, params: GFieldParams | None = None) -> FlowState:
    params = params or GFieldParams.from_context(ctx)
    G = g_transport_step(state, params, ctx)
    y, z, omega = chemistry_step(state, ctx, g_coefficients(params, G))
    theta = energy_step(state, y, omega, ctx)
    return _finish(state, y, z, theta, ctx, G=G)


def frozen_front_trajectory(cfg, rho: float, n_steps: int, x0: float | None = None,
                            scheme: str = "muscl"):
    """G = 0.5 crossing times and positions for pure propagation in gas at rest.

    Density is held at ``rho`` everywhere and the velocity at zero, so the
    exact front speed is ``(rho_u / rho) u_f``.  The initial step in ``G``
    sits at ``x0`` (default: a fifth of the domain).
    """
    from .diagnostics import crossings

    ctx = StepContext.from_config(cfg)
    params = GFieldParams.from_context(ctx)
    mesh = ctx.mesh
    x = mesh.centers
    x0 = mesh.x_left + 0.2 * (mesh.x_right - mesh.x_left) if x0 is None else x0
    n = mesh.n_cells
    state = FlowState(
        t=0.0, rho=np.full(n, rho), rho_prev=np.full(n, rho), y=np.zeros((4, n)),
        z=np.zeros(n), theta=np.ones(n), u=np.zeros(n + 1), G=np.where(x < x0, 0.0, 1.0),
    )
    times, positions = [], []
    for k in range(n_steps):
        state.G = g_transport_step(state, params, ctx, propagation=scheme)
        state.step += 1
        xs = crossings(x, state.G, 0.5)
        if len(xs) == 1:
            times.append((k + 1) * ctx.dt)
            positions.append(float(xs[0]))
    return np.array(times), np.array(positions)
