"""Fractional-step finite-volume scheme for the balance-equation (primitive) model.

Each step solves, in order: species transport with the reaction sink
(chemistry), the enthalpy balance for the temperature, the equation of state,
and the mixture mass balance for the face velocities.  The time derivative of
a transported quantity ``q`` pairs ``rho^n q^{n+1}`` with ``rho^{n-1} q^n``;
together with the mass balance solved at the end of the previous step this
makes the implicit upwind operators M-matrices whose rows sum to
``rho^{n-1} h / dt``, so transported fractions obey a discrete maximum principle.

All assembled rows are multiplied by the cell width ``h``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import IF, IN, IO, IP, FlowState, Mesh1D, SimulationConfig, SpeciesTable
from .errors import ConsistencyError, SolverError
from .thermo import eos_density, mixture_cp, reduced_z, y_O_from_z
from .tridiag import solve_tridiagonal

BOUND_TOL = 1e-9


@dataclass(frozen=True)
class Inflow:
    """Dirichlet data used on any boundary face through which mass enters."""

    y: np.ndarray
    theta: float
    rho: float
    z: float
    G: float = 1.0

    @classmethod
    def from_config(cls, cfg: SimulationConfig, species: SpeciesTable) -> Inflow:
        y = np.asarray(cfg.y0, dtype=float)
        return cls(
            y=y,
            theta=float(cfg.theta0),
            rho=float(eos_density(y, cfg.theta0, species, cfg.P_th)),
            z=float(reduced_z(y[IF], y[IO], species)),
        )


@dataclass
class StepContext:
    """Fixed data shared by every step of one simulation."""

    cfg: SimulationConfig
    species: SpeciesTable
    mesh: Mesh1D
    inflow: Inflow
    left_flux: float = 0.0
    check_bounds: bool = True

    @classmethod
    def from_config(cls, cfg: SimulationConfig, **kw) -> StepContext:
        species = kw.pop("species", None) or cfg.species
        mesh = kw.pop("mesh", None) or cfg.mesh()
        return cls(cfg, species, mesh, Inflow.from_config(cfg, species), **kw)

    @property
    def dt(self) -> float:
        return self.cfg.dt


# -- closures -----------------------------------------------------------------

def arrhenius_rate(y_F, y_O, theta, A=1.0e4, Ta=900.0, theta_cut=None):
    """Molar reaction rate ``A y_F y_O exp(-Ta / theta)``.

    With ``theta_cut`` set, the rate vanishes at temperatures below it.
    """
    theta = np.asarray(theta, dtype=float)
    rate = A * np.asarray(y_F) * np.asarray(y_O) * np.exp(-Ta / theta)
    if theta_cut is not None:
        rate = np.where(theta >= theta_cut, rate, 0.0)
    return rate


def species_reaction_rates(omega, species: SpeciesTable):
    """Mass production rates of F, O, P, N for molar rate ``omega``.

    The result has the species on the first axis.
    """
    omega = np.asarray(omega, dtype=float)
    nu = species.stoich_mass
    rates = np.multiply.outer(nu, omega)
    # nu_P W_P equals nu_F W_F + nu_O W_O only up to roundoff; close the sum exactly.
    rates[IP] = -(rates[IF] + rates[IO])
    return rates


def linearized_rate(prefactor, y_F_old, y_O_old, z_new, species: SpeciesTable):
    """Split ``omega = prefactor * y_F * y_O`` as ``k_F * y_F^{n+1} + k_0``.

    ``z^{n+1}`` fixes ``y_O^{n+1} = s y_F^{n+1} + c`` with
    ``c = 1 - (1 + s) z``.  Where the fuel is the deficient reactant
    (``c >= 0``) the rate is implicit in ``y_F`` with ``y_O`` frozen; elsewhere
    it is implicit in ``y_O`` with ``y_F`` frozen.  Either way both fractions
    stay non-negative for any time step.
    """
    s = species.s
    c = 1.0 - (1.0 + s) * z_new
    fuel_limited = c >= 0.0
    k_F = np.where(fuel_limited, prefactor * y_O_old, prefactor * y_F_old * s)
    k_0 = np.where(fuel_limited, 0.0, prefactor * y_F_old * c)
    return k_F, k_0


def arrhenius_coefficients(state: FlowState, z_new, ctx: StepContext):
    cfg = ctx.cfg
    pre = arrhenius_rate(1.0, 1.0, state.theta, cfg.arrhenius_A, cfg.arrhenius_Ta,
                         cfg.arrhenius_theta_cut)
    return linearized_rate(pre, state.y[IF], state.y[IO], z_new, ctx.species)


# -- transport operators ------------------------------------------------------

def face_mass_flux(u, rho, inflow_rho: float):
    """Mass flux ``rho_sigma u_sigma`` with the face density taken upstream."""
    u = np.asarray(u, dtype=float)
    left = np.concatenate(([inflow_rho], rho))
    right = np.concatenate((rho, [inflow_rho]))
    face_rho = np.where(u > 0, left, np.where(u < 0, right, 0.5 * (left + right)))
    return face_rho * u


def upwind_convection_row(mesh: Mesh1D, fluxes, cell: int):
    """Coefficients of ``div(F q)_K`` with upwind face values.

    Returns ``(lower, diag, upper, boundary)``: the multipliers of
    ``q_{K-1}``, ``q_K``, ``q_{K+1}`` and of the Dirichlet inflow value, all
    divided by ``h_K``.
    """
    F_l, F_r = fluxes[cell], fluxes[cell + 1]
    h = mesh.h[cell]
    lower = upper = boundary = 0.0
    diag = max(F_r, 0.0) + max(-F_l, 0.0)
    if cell > 0:
        lower = -max(F_l, 0.0)
    else:
        boundary -= max(F_l, 0.0)
    if cell < mesh.n_cells - 1:
        upper = -max(-F_r, 0.0)
    else:
        boundary -= max(-F_r, 0.0)
    return lower / h, diag / h, upper / h, boundary / h


def transport_system(mesh: Mesh1D, flux, rho, dt):
    """Rows of ``h/dt rho^n q^{n+1} + h div(F q^{n+1})`` for every cell.

    Returns ``(lower, diag, upper, inflow_left, inflow_right)``; the last two
    are the mass fluxes entering through the boundary faces, which multiply the
    Dirichlet value on the right-hand side.
    """
    F_l, F_r = flux[:-1], flux[1:]
    diag = rho * mesh.h / dt + np.maximum(F_r, 0.0) + np.maximum(-F_l, 0.0)
    lower = -np.maximum(F_l, 0.0)
    upper = -np.maximum(-F_r, 0.0)
    in_left = max(flux[0], 0.0)
    in_right = max(-flux[-1], 0.0)
    lower[0] = 0.0
    upper[-1] = 0.0
    return lower, diag, upper, in_left, in_right


def _solve(lower, diag, upper, rhs, what, step):
    try:
        x = solve_tridiagonal(lower, diag, upper, rhs)
    except ZeroDivisionError as exc:
        raise SolverError(f"{what}: singular system", step) from exc
    if not np.all(np.isfinite(x)):
        raise SolverError(f"{what}: non-finite solution", step)
    return x


def _check_fraction(q, name, step):
    lo, hi = float(np.min(q)), float(np.max(q))
    if lo < -BOUND_TOL or hi > 1.0 + BOUND_TOL:
        raise ConsistencyError(f"step {step}: {name} out of bounds [{lo:.3e}, {hi:.3e}]")
    return np.clip(q, 0.0, 1.0)


def transport_scalar(mesh, flux, rho, rho_prev, q_old, q_in, dt, extra_diag=None, source=None):
    """One implicit upwind transport solve for a cell scalar.

    ``extra_diag`` and ``source`` are per-cell terms already multiplied by ``h``.
    """
    lower, diag, upper, in_l, in_r = transport_system(mesh, flux, rho, dt)
    rhs = rho_prev * mesh.h / dt * q_old
    rhs[0] += in_l * q_in
    rhs[-1] += in_r * q_in
    if extra_diag is not None:
        diag = diag + extra_diag
    if source is not None:
        rhs = rhs + source
    return _solve(lower, diag, upper, rhs, "transport", None)


# -- the four steps -----------------------------------------------------------

def chemistry_step(state: FlowState, ctx: StepContext, coefficients=arrhenius_coefficients):
    """Species transport and reaction.

    Returns ``(y_new, z_new, omega_new)`` where ``omega_new`` is the molar rate
    consistent with the fuel consumed during the step.
    """
    mesh, species, dt = ctx.mesh, ctx.species, ctx.dt
    flux = face_mass_flux(state.u, state.rho, ctx.inflow.rho)
    args = (mesh, flux, state.rho, state.rho_prev)
    y_N = transport_scalar(*args, state.y[IN], ctx.inflow.y[IN], dt)
    z = transport_scalar(*args, state.z, ctx.inflow.z, dt)
    z = _check_fraction(z, "z", state.step)

    k_F, k_0 = coefficients(state, z, ctx)
    nuW_F = -species.stoich_mass[IF]
    h = mesh.h
    y_F = transport_scalar(
        *args, state.y[IF], ctx.inflow.y[IF], dt,
        extra_diag=h * nuW_F * k_F, source=-h * nuW_F * k_0,
    )
    y_F = _check_fraction(y_F, "y_F", state.step)
    y_N = _check_fraction(y_N, "y_N", state.step)
    try:
        y_O = y_O_from_z(z, y_F, species)
    except ConsistencyError as exc:
        raise ConsistencyError(f"step {state.step}: {exc}") from exc
    y_P = _check_fraction(1.0 - y_F - y_O - y_N, "y_P", state.step)
    y = np.vstack((y_F, y_O, y_P, y_N))
    omega = np.maximum(k_F * y_F + k_0, 0.0)
    return y, z, omega


def energy_step(state: FlowState, y_new, omega, ctx: StepContext):
    """Implicit enthalpy balance for ``theta^{n+1}``."""
    mesh, species, dt = ctx.mesh, ctx.species, ctx.dt
    lam = ctx.cfg.lam
    flux = face_mass_flux(state.u, state.rho, ctx.inflow.rho)
    F_l, F_r = flux[:-1], flux[1:]
    h = mesh.h
    cp_new = mixture_cp(y_new, species)
    cp_old = mixture_cp(state.y, species)
    cp_in = float(mixture_cp(ctx.inflow.y, species))

    diag = state.rho * h * cp_new / dt + (np.maximum(F_r, 0.0) + np.maximum(-F_l, 0.0)) * cp_new
    lower = np.zeros_like(diag)
    upper = np.zeros_like(diag)
    lower[1:] = -np.maximum(F_l[1:], 0.0) * cp_new[:-1]
    upper[:-1] = -np.maximum(-F_r[:-1], 0.0) * cp_new[1:]

    cond = lam / mesh.center_distance
    diag[1:] += cond
    diag[:-1] += cond
    lower[1:] -= cond
    upper[:-1] -= cond

    omega_theta = -(species.dh_array @ species_reaction_rates(omega, species))
    rhs = state.rho_prev * h * cp_old * state.theta / dt + h * omega_theta
    rhs[0] += max(flux[0], 0.0) * cp_in * ctx.inflow.theta
    rhs[-1] += max(-flux[-1], 0.0) * cp_in * ctx.inflow.theta

    theta = _solve(lower, diag, upper, rhs, "energy", state.step)
    if not np.all(theta > 0):
        raise SolverError(f"non-positive temperature (min {theta.min():.3e})", state.step)
    return theta


def eos_step(y_new, theta_new, ctx: StepContext):
    return eos_density(y_new, theta_new, ctx.species, ctx.cfg.P_th)


def mass_step(rho_new, rho_old, ctx: StepContext):
    """Face velocities from the discrete mass balance, marching from the left wall.

    Returns ``(u_new, flux_new)``.
    """
    mesh, dt = ctx.mesh, ctx.dt
    flux = np.empty(mesh.n_cells + 1)
    flux[0] = ctx.left_flux
    flux[1:] = ctx.left_flux - np.cumsum(mesh.h * (rho_new - rho_old) / dt)
    left = np.concatenate(([ctx.inflow.rho], rho_new))
    right = np.concatenate((rho_new, [ctx.inflow.rho]))
    face_rho = np.where(flux > 0, left, np.where(flux < 0, right, 0.5 * (left + right)))
    if np.any(face_rho <= 0):
        raise SolverError("zero face density")
    return flux / face_rho, flux


def mass_residual(rho_new, rho_old, flux, mesh: Mesh1D, dt):
    """Per-cell residual of ``(rho^{n+1} - rho^n)/dt + div(F)``, scaled by ``h``."""
    return mesh.h * (rho_new - rho_old) / dt + flux[1:] - flux[:-1]


def _finish(state, y, z, theta, ctx, G=None):
    rho = eos_step(y, theta, ctx)
    u, _ = mass_step(rho, state.rho, ctx)
    new = FlowState(
        t=state.t + ctx.dt, rho=rho, rho_prev=state.rho, y=y, z=z, theta=theta,
        u=u, G=G, step=state.step + 1,
    )
    if ctx.check_bounds:
        bad = new.violations()
        if bad:
            raise ConsistencyError(f"step {new.step}: " + "; ".join(bad))
    return new


def advance_primitive(state: FlowState, ctx: StepContext) -> FlowState:
    y, z, omega = chemistry_step(state, ctx)
    theta = energy_step(state, y, omega, ctx)
    return _finish(state, y, z, theta, ctx)
