"""Exception types shared across the simulator."""


class SimulationError(Exception):
    """Base class for la_nav errors."""


class ConfigError(SimulationError):
    """Invalid or inconsistent run configuration.

    Carries the offending field path so CLI users can locate the problem.
    """

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"config field '{field}': {message}")


class InfeasibleWorldError(SimulationError):
    """World geometry leaves no room for a valid goal or start position."""
