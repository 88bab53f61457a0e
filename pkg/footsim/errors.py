"""Exception hierarchy and process exit codes."""

__all__ = [
    "EXIT_OK",
    "EXIT_PARSE",
    "EXIT_DOMAIN",
    "EXIT_FAULT",
    "EXIT_IO",
    "FootsimError",
    "DomainError",
    "ScenarioParseError",
    "SimulationFault",
]

from typing import Optional

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_FAULT = 4
EXIT_IO = 5


class FootsimError(Exception):
    """Base class for every error raised by the simulator."""

    exit_code = EXIT_DOMAIN


class DomainError(FootsimError, ValueError):
    """Input value outside the domain of an operation (limits, non-finite, bad sizes)."""

    exit_code = EXIT_DOMAIN


class ScenarioParseError(FootsimError):
    """Scenario text could not be parsed or validated."""

    exit_code = EXIT_PARSE

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.message = message
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{where}: {message}"
        super().__init__(message)


class SimulationFault(FootsimError):
    """The integrated state became non-finite."""

    exit_code = EXIT_FAULT

    def __init__(self, message: str, t: float = 0.0, phase: str = ""):
        self.message = message
        self.t = t
        self.phase = phase
        super().__init__(message)
