"""Exception types raised by the simulator."""


class SimulationError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInput(SimulationError):
    """An argument violates a documented precondition (shape, finiteness, range)."""


class DegenerateDrive(SimulationError):
    """All drive couplings vanish, so the requested construction is undefined."""


class UnsupportedConfiguration(SimulationError):
    """The requested operation is only defined for a restricted parameter set."""


class DegenerateSpectrum(SimulationError):
    """Level assignment is ambiguous because dressed eigenvalues coincide."""


class ConvergenceFailure(SimulationError):
    """Step refinement did not reach the requested tolerance within the retry cap."""


class ConfigError(SimulationError):
    """A scenario configuration file is malformed or contains unknown keys."""
