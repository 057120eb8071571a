"""Exceptions shared across the package."""


class PipeRouteError(Exception):
    """Base class for package errors."""


class TooManyPipes(PipeRouteError):
    """Requested more pipes than the perimeter can hold (needs 2k open perimeter cells)."""


class GenerationFailed(PipeRouteError):
    """Instance generation could not satisfy its constraints within its retry budget."""


class InvalidInstance(PipeRouteError):
    """Instance text is malformed or violates an instance invariant."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class InvalidSolution(PipeRouteError):
    """Solution text is malformed (feasibility problems are the validator's job)."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class CapExceeded(PipeRouteError):
    """Exhaustive search hit its cost cap without deciding feasibility."""


class SearchTimeout(PipeRouteError):
    """A search ran past its deadline.  Internal; solvers convert it to a timeout status."""
