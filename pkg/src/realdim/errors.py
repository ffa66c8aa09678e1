"""Shared exception types."""


class RealdimError(Exception):
    """Base class for errors raised by this package."""


class SimplicityError(RealdimError):
    """An edge labelling violates simplicity.

    Carries the full violation report so callers (parsers, the CLI) can
    show every offending edge pair rather than just the first.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(v.message for v in self.violations)
        super().__init__(f"labelling is not simple: {lines}")


class BoundExceededError(RealdimError):
    """An exhaustive routine was asked to run outside its size bound."""


class DocumentError(RealdimError):
    """A graph or framework document failed to parse."""

    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{message}{where}")


class DegenerateLatticeError(RealdimError):
    """A numeric operation produced a (near-)zero lattice vector."""
