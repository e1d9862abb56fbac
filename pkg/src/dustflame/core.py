"""Domain types: species data, staggered mesh, flow state and run configuration."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

#: Index of each species in the ``y`` arrays.
SPECIES = ("F", "O", "P", "N")
IF, IO, IP, IN = range(4)

GAS_CONSTANT = 8.31451  # J K^-1 mol^-1

MODELS = ("primitive", "flame-velocity")


@dataclass(frozen=True)
class SpeciesTable:
    """Properties of the fuel (F), oxidant (O), product (P) and neutral gas (N).

    Arrays are ordered as :data:`SPECIES`.  Molar masses are in kg/mol,
    specific heats in J/(kg K), formation enthalpies (at 0 K) in J/kg.
    """

    W: tuple[float, float, float, float] = (0.02, 0.02, 0.02, 0.02)
    nu_F: float = 1.0
    nu_O: float = 1.0
    nu_P: float = 2.0
    cp: tuple[float, float, float, float] = (1.0e3, 2.0e3, 4.0e3, 3.0e3)
    dh: tuple[float, float, float, float] = (1.0e6, -2.0e6, -4.0e6, 3.0e6)
    rho_F: float = 100.0
    R: float = GAS_CONSTANT
    names: tuple[str, str, str, str] = SPECIES

    def __post_init__(self):
        for name in ("W", "cp", "dh"):
            value = tuple(float(v) for v in getattr(self, name))
            if len(value) != 4:
                raise ConfigError(f"{name} needs four entries, got {len(value)}")
            object.__setattr__(self, name, value)
        if min(self.W) <= 0 or min(self.cp) <= 0:
            raise ConfigError("molar masses and specific heats must be positive")
        if self.rho_F <= 0:
            raise ConfigError("solid fuel density must be positive")
        if min(self.nu_F, self.nu_O, self.nu_P) <= 0:
            raise ConfigError("stoichiometric coefficients must be positive")
        lhs = self.nu_F * self.W[IF] + self.nu_O * self.W[IO]
        rhs = self.nu_P * self.W[IP]
        if abs(lhs - rhs) > 1e-12 * max(abs(lhs), abs(rhs)):
            raise ConfigError(
                f"reaction does not conserve mass: nu_F W_F + nu_O W_O = {lhs!r}, "
                f"nu_P W_P = {rhs!r}"
            )

    @property
    def s(self) -> float:
        """Oxidant-to-fuel stoichiometric mass ratio."""
        return self.nu_O * self.W[IO] / (self.nu_F * self.W[IF])

    @property
    def stoich_mass(self) -> np.ndarray:
        """Signed mass yield per unit reaction rate, ``(-nu_F W_F, -nu_O W_O, nu_P W_P, 0)``."""
        return np.array(
            [-self.nu_F * self.W[IF], -self.nu_O * self.W[IO], self.nu_P * self.W[IP], 0.0]
        )

    @property
    def cp_array(self) -> np.ndarray:
        return np.asarray(self.cp)

    @property
    def dh_array(self) -> np.ndarray:
        return np.asarray(self.dh)


@dataclass(frozen=True)
class Mesh1D:
    """Cell-centred scalars, face-located velocities and fluxes."""

    faces: np.ndarray

    def __post_init__(self):
        faces = np.asarray(self.faces, dtype=float)
        if faces.ndim != 1 or faces.size < 4:
            raise ConfigError("a mesh needs at least 3 cells")
        if not np.all(np.diff(faces) > 0):
            raise ConfigError("cell widths must be positive")
        faces.setflags(write=False)
        object.__setattr__(self, "faces", faces)

    @property
    def n_cells(self) -> int:
        return self.faces.size - 1

    @property
    def x_left(self) -> float:
        return float(self.faces[0])

    @property
    def x_right(self) -> float:
        return float(self.faces[-1])

    @property
    def h(self) -> np.ndarray:
        return np.diff(self.faces)

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.faces[:-1] + self.faces[1:])

    @property
    def center_distance(self) -> np.ndarray:
        """Distance between the centres of the cells adjacent to each interior face."""
        return np.diff(self.centers)

    def face_cells(self, face: int) -> tuple[int | None, int | None]:
        """Left and right cell of ``face``; ``None`` outside the domain."""
        left = face - 1 if face > 0 else None
        right = face if face < self.n_cells else None
        return left, right


def make_uniform_mesh(x_left: float, x_right: float, n_cells: int) -> Mesh1D:
    if not x_right > x_left:
        raise ConfigError(f"degenerate domain [{x_left}, {x_right}]")
    if int(n_cells) != n_cells or n_cells < 3:
        raise ConfigError(f"n_cells must be an integer >= 3, got {n_cells}")
    return Mesh1D(np.linspace(x_left, x_right, int(n_cells) + 1))


@dataclass
class FlowState:
    """One time level of the discrete unknowns.

    ``y`` has shape ``(4, n_cells)`` in :data:`SPECIES` order, ``u`` lives on
    the ``n_cells + 1`` faces.  ``rho_prev`` is the density one level back,
    which the time-shifted scheme pairs with the current mass fractions.
    """

    t: float
    rho: np.ndarray
    rho_prev: np.ndarray
    y: np.ndarray
    z: np.ndarray
    theta: np.ndarray
    u: np.ndarray
    G: np.ndarray | None = None
    step: int = 0

    @property
    def n_cells(self) -> int:
        return self.rho.size

    def copy(self) -> FlowState:
        return dataclasses.replace(
            self,
            rho=self.rho.copy(),
            rho_prev=self.rho_prev.copy(),
            y=self.y.copy(),
            z=self.z.copy(),
            theta=self.theta.copy(),
            u=self.u.copy(),
            G=None if self.G is None else self.G.copy(),
        )

    def violations(self, tol: float = 1e-12) -> list[str]:
        """Names of the invariants this state breaks (empty when admissible)."""
        bad = []
        if np.any(self.y < 0) or np.any(self.y > 1):
            bad.append("mass fraction outside [0, 1]")
        if np.any(np.abs(self.y.sum(axis=0) - 1.0) > tol):
            bad.append("mass fractions do not sum to 1")
        if not np.all(self.theta > 0):
            bad.append("non-positive temperature")
        if not (np.all(self.rho > 0) and np.all(self.rho_prev > 0)):
            bad.append("non-positive density")
        if np.any(self.z < 0) or np.any(self.z > 1):
            bad.append("z outside [0, 1]")
        if self.G is not None and (np.any(self.G < 0) or np.any(self.G > 1)):
            bad.append("G outside [0, 1]")
        for name in ("rho", "y", "theta", "u", "z"):
            if not np.all(np.isfinite(getattr(self, name))):
                bad.append(f"non-finite {name}")
        return bad


@dataclass
class SimulationConfig:
    """Everything needed to set up and run one simulation.

    Defaults reproduce the dust-cloud data set (stoichiometric F + O + N
    mixture at 300 K) on a 0.1 m domain.
    """

    model: str = "primitive"
    x_left: float = 0.0
    x_right: float = 0.1
    n_cells: int = 2048
    dt: float = 2.0e-4
    t_end: float = 0.1
    P_th: float = 101325.0
    lam: float = 0.005
    y0: tuple[float, float, float, float] = (0.4, 0.4, 0.0, 0.2)
    theta0: float = 300.0
    ignition_cells: int = 2
    ignition_theta: float = 1500.0
    u_f: float = 0.0
    delta: float = 1.0e-4
    rho_u: float | None = None
    arrhenius_A: float = 1.0e4
    arrhenius_Ta: float = 900.0
    arrhenius_theta_cut: float | None = None
    snapshot_every: int = 100
    out_dir: str = "out"
    species: SpeciesTable = field(default_factory=SpeciesTable)

    def __post_init__(self):
        self.y0 = tuple(float(v) for v in self.y0)
        self.validate()

    def validate(self):
        if self.model not in MODELS:
            raise ConfigError(f"unknown model {self.model!r}; expected one of {MODELS}")
        if not self.dt > 0:
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if self.t_end < 0:
            raise ConfigError(f"t_end must be non-negative, got {self.t_end}")
        if not self.P_th > 0:
            raise ConfigError("P_th must be positive")
        if self.lam < 0:
            raise ConfigError("lambda must be non-negative")
        if len(self.y0) != 4 or any(not 0.0 <= v <= 1.0 for v in self.y0):
            raise ConfigError(f"initial mass fractions must lie in [0, 1], got {self.y0}")
        if abs(sum(self.y0) - 1.0) > 1e-12:
            raise ConfigError(f"initial mass fractions sum to {sum(self.y0)!r}, not 1")
        if not self.theta0 > 0 or not self.ignition_theta > 0:
            raise ConfigError("temperatures must be positive")
        if self.ignition_cells < 0 or self.ignition_cells > self.n_cells:
            raise ConfigError("ignition_cells out of range")
        if self.model == "flame-velocity":
            if not self.delta > 0:
                raise ConfigError("delta must be positive for the flame-velocity model")
            if self.u_f < 0:
                raise ConfigError("u_f must be non-negative")
            if self.rho_u is not None and not self.rho_u > 0:
                raise ConfigError("rho_u must be positive")
        if self.arrhenius_A < 0:
            raise ConfigError("Arrhenius pre-factor must be non-negative")
        if self.snapshot_every < 1:
            raise ConfigError("snapshot_every must be >= 1")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.dt))

    def mesh(self) -> Mesh1D:
        return make_uniform_mesh(self.x_left, self.x_right, self.n_cells)


def initial_state(cfg: SimulationConfig, species: SpeciesTable | None = None,
                  mesh: Mesh1D | None = None) -> FlowState:
    """Quiescent homogeneous mixture with a thin ignition zone at the left wall."""
    from .thermo import eos_density, reduced_z

    species = species or cfg.species
    mesh = mesh or cfg.mesh()
    if abs(sum(cfg.y0) - 1.0) > 1e-12:
        raise ConfigError(f"initial mass fractions sum to {sum(cfg.y0)!r}, not 1")
    n = mesh.n_cells
    y = np.repeat(np.asarray(cfg.y0, dtype=float)[:, None], n, axis=1)
    theta = np.full(n, float(cfg.theta0))
    ign = slice(0, cfg.ignition_cells)
    G = None
    if cfg.model == "primitive":
        theta[ign] = cfg.ignition_theta
    else:
        G = np.ones(n)
        G[ign] = 0.0
    rho = eos_density(y, theta, species, cfg.P_th)
    z = reduced_z(y[IF], y[IO], species)
    return FlowState(
        t=0.0, rho=rho, rho_prev=rho.copy(), y=y, z=z, theta=theta,
        u=np.zeros(n + 1), G=G,
    )
