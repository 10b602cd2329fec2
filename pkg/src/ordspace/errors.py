"""Exception hierarchy. Each class maps to one CLI exit code."""


class OrderSpaceError(Exception):
    exit_code = 1


class ParseError(OrderSpaceError, ValueError):
    exit_code = 2


class PreconditionError(OrderSpaceError, ValueError):
    exit_code = 3


class DimensionError(PreconditionError):
    pass


class MalformedElementError(PreconditionError):
    pass


class ValidationError(PreconditionError):
    """Raised when a space violates an ordered-space axiom; carries the full report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotArchimedeanError(PreconditionError):
    pass


class CapabilityError(OrderSpaceError):
    exit_code = 4


class ToleranceUnmetError(OrderSpaceError):
    exit_code = 5

    def __init__(self, message, interval=None):
        super().__init__(message)
        self.interval = interval


class BracketError(PreconditionError):
    pass


class UnboundedPolytopeError(PreconditionError):
    def __init__(self, message, ray=None):
        super().__init__(message)
        self.ray = ray
