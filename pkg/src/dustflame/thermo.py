"""Equation of state, mixture heat capacity, reduced variable and adiabatic temperature.

Functions accept scalars or arrays; mass fractions are indexed by species along
the first axis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import IF, IN, IO, IP, SpeciesTable
from .errors import ConsistencyError, DomainError

Z_TOL = 1e-9


@dataclass(frozen=True)
class MixtureSample:
    y: tuple[float, float, float, float]
    theta: float

    def __post_init__(self):
        y = tuple(float(v) for v in self.y)
        if len(y) != 4 or any(not 0.0 <= v <= 1.0 for v in y):
            raise DomainError(f"mass fractions must lie in [0, 1], got {y}")
        if abs(sum(y) - 1.0) > 1e-12:
            raise DomainError(f"mass fractions sum to {sum(y)!r}")
        if not self.theta > 0:
            raise DomainError(f"temperature must be positive, got {self.theta}")
        object.__setattr__(self, "y", y)


def eos_density(y, theta, species: SpeciesTable, P_th: float):
    """Density of a perfect-gas mixture carrying an incompressible solid fuel."""
    y = np.asarray(y, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if np.any(theta <= 0):
        raise DomainError("temperature must be positive")
    if P_th <= 0:
        raise DomainError("P_th must be positive")
    W = species.W
    gas = y[IO] / W[IO] + y[IP] / W[IP] + y[IN] / W[IN]
    denom = species.R * theta / P_th * gas + y[IF] / species.rho_F
    if np.any(denom <= 0):
        raise DomainError("zero specific volume")
    return 1.0 / denom


def sample_density(s: MixtureSample, species: SpeciesTable, P_th: float) -> float:
    return float(eos_density(s.y, s.theta, species, P_th))


def reduced_z(y_F, y_O, species: SpeciesTable):
    s = species.s
    return (s * np.asarray(y_F, dtype=float) + 1.0 - np.asarray(y_O, dtype=float)) / (1.0 + s)


def y_O_from_z(z, y_F, species: SpeciesTable, tol: float = Z_TOL):
    """Oxidant mass fraction recovered from ``z`` and ``y_F``, clipped to [0, 1].

    Raises :class:`ConsistencyError` when the raw value leaves
    ``[-tol, 1 + tol]``; that only happens if a transported field broke its bounds.
    """
    s = species.s
    raw = 1.0 + s * np.asarray(y_F, dtype=float) - (1.0 + s) * np.asarray(z, dtype=float)
    if np.any(raw < -tol) or np.any(raw > 1.0 + tol):
        raise ConsistencyError(
            f"oxidant fraction from z out of bounds: min {np.min(raw):.3e}, max {np.max(raw):.3e}"
        )
    out = np.clip(raw, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def mixture_cp(y, species: SpeciesTable):
    y = np.asarray(y, dtype=float)
    return np.tensordot(species.cp_array, y, axes=(0, 0))


def total_enthalpy(y, theta, species: SpeciesTable):
    """Sensible plus formation enthalpy per unit mass, referenced at 0 K."""
    y = np.asarray(y, dtype=float)
    return mixture_cp(y, species) * theta + np.tensordot(species.dh_array, y, axes=(0, 0))


def complete_combustion(y, species: SpeciesTable) -> np.ndarray:
    """Composition after the limiting reactant is fully consumed."""
    y = np.array(y, dtype=float)
    nuW = -species.stoich_mass
    extent = min(y[IF] / nuW[IF], y[IO] / nuW[IO])
    burnt = y - extent * nuW
    burnt[IF] = max(burnt[IF], 0.0)
    burnt[IO] = max(burnt[IO], 0.0)
    burnt[IP] = 1.0 - burnt[IF] - burnt[IO] - burnt[IN]
    return burnt


def adiabatic_flame_temperature(unburnt: MixtureSample, species: SpeciesTable):
    """Burnt composition and temperature of complete isobaric combustion.

    Returns ``(y_burnt, theta_burnt)``.
    """
    y_u = np.asarray(unburnt.y)
    y_b = complete_combustion(y_u, species)
    h = total_enthalpy(y_u, unburnt.theta, species)
    theta_b = (h - float(species.dh_array @ y_b)) / float(mixture_cp(y_b, species))
    if not theta_b > 0:
        raise DomainError(f"non-positive burnt temperature {theta_b}")
    return y_b, float(theta_b)
