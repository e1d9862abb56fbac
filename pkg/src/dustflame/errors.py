"""Exception hierarchy shared by the solvers, diagnostics and CLI."""


class DustFlameError(Exception):
    """Base class for every error raised by the package."""


class ConfigError(DustFlameError, ValueError):
    """Invalid configuration, mesh or initial data."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DomainError(DustFlameError, ValueError):
    """Thermodynamic function evaluated outside its domain."""


class ConsistencyError(DustFlameError):
    """A bound the scheme guarantees was violated beyond roundoff."""


class SolverError(DustFlameError):
    """Fatal numerical failure inside a time step."""

    def __init__(self, message, step=None):
        self.step = step
        if step is not None:
            message = f"step {step}: {message}"
        super().__init__(message)


class CFLError(SolverError):
    """Explicit part of the G transport step would break monotonicity."""

    def __init__(self, cfl, limit=1.0, step=None):
        self.cfl = cfl
        self.limit = limit
        super().__init__(f"explicit CFL {cfl:.3g} exceeds {limit:g}; reduce dt", step)


class FrontNotEstablished(DustFlameError):
    """The tracked field does not cross the level exactly once."""


class WaveNotSteady(DustFlameError):
    """Plateaus around the front are not flat, or the profile still changes."""
