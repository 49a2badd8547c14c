"""
Errors - Exception hierarchy for the instruction sequence toolkit
"""


class IsaError(Exception):
    """Base class for every error raised by the toolkit"""


class ParseError(IsaError):
    """Malformed program, sequence, interface, family or task text"""

    def __init__(self, message: str, position: int = 0):
        super().__init__(f"{message} (at offset {position})")
        self.message = message
        self.position = position


class GscExpansionError(IsaError):
    """A generalised semicolon template instantiated to an ill-formed instruction"""


class ServiceError(IsaError):
    """A method call a service kernel cannot process"""


class LayoutError(IsaError):
    """Inconsistent register layout or task table"""


class InterfaceViolation(IsaError):
    """A sequence requires basic actions the service family does not provide"""


class GeneratorError(IsaError):
    """Generator called with parameters outside its domain"""


class UnfoldError(IsaError):
    """Unfolding cannot pick a power because no input terminates"""
