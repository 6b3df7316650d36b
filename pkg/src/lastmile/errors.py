"""Exception hierarchy. Each class carries the CLI error category it maps to."""


class LastMileError(Exception):
    category = "internal"


class ParseError(LastMileError):
    """Input file missing or not parseable."""

    category = "parse"


class ValidationError(LastMileError, ValueError):
    """Input parsed but violates a model invariant."""

    category = "validation"


class OracleCapError(LastMileError, ValueError):
    """Exact TSP oracle asked to solve more stops than its cap."""

    category = "cap"


class SimulationError(LastMileError, RuntimeError):
    category = "internal"
