"""One-dimensional low-Mach solver for dust-cloud flames.

Two formulations share one bounds-preserving fractional-step finite-volume
scheme: an Arrhenius (primitive) model and a flame-velocity model that tracks
the front with a transported colour function.
"""

from .core import (
    IF, IN, IO, IP, MODELS, SPECIES, FlowState, Mesh1D, SimulationConfig, SpeciesTable,
    initial_state, make_uniform_mesh,
)
from .diagnostics import WaveReport, compare_profiles, flame_velocity_from_jump, front_position, wave_speed
from .errors import (
    CFLError, ConfigError, ConsistencyError, DomainError, DustFlameError, FrontNotEstablished,
    SolverError, WaveNotSteady,
)
from .gfield import GFieldParams, advance_gfield
from .io import PRESETS, format_config, parse_config, preset_config, read_snapshot, write_snapshot
from .primitive import StepContext, advance_primitive
from .runner import compare_runs, run_simulation, sweep
from .thermo import MixtureSample, adiabatic_flame_temperature, eos_density, reduced_z, y_O_from_z

__version__ = "0.1.0"

__all__ = [
    "IF", "IO", "IP", "IN", "MODELS", "SPECIES",
    "FlowState", "Mesh1D", "SimulationConfig", "SpeciesTable", "initial_state", "make_uniform_mesh",
    "WaveReport", "compare_profiles", "flame_velocity_from_jump", "front_position", "wave_speed",
    "CFLError", "ConfigError", "ConsistencyError", "DomainError", "DustFlameError",
    "FrontNotEstablished", "SolverError", "WaveNotSteady",
    "GFieldParams", "advance_gfield",
    "PRESETS", "format_config", "parse_config", "preset_config", "read_snapshot", "write_snapshot",
    "StepContext", "advance_primitive",
    "compare_runs", "run_simulation", "sweep",
    "MixtureSample", "adiabatic_flame_temperature", "eos_density", "reduced_z", "y_O_from_z",
]
