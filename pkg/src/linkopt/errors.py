"""Exception types shared across the package."""


class LinkoptError(Exception):
    """Base class for package-specific errors."""


class ParseError(LinkoptError, ValueError):
    """Malformed edge-list input."""

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class GraphStructureError(LinkoptError, ValueError):
    """Graph violates a structural precondition (empty, disconnected, ...)."""


class NonConvergenceError(LinkoptError, RuntimeError):
    """An iterative numerical method failed to converge."""


class InstanceTooLargeError(LinkoptError, ValueError):
    """Exhaustive enumeration was requested on an instance above the guard."""
