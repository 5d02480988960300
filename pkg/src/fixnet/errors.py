"""
Exception hierarchy for fixnet.

Every failure raised by the library derives from FixnetError so callers
(and the CLI) can map families of errors onto exit codes.
"""


class FixnetError(Exception):
    """Base exception for fixnet errors."""
    pass


class SizeCapError(FixnetError):
    """An instance exceeds one of the configured size caps."""
    pass


class PreconditionError(FixnetError):
    """An operation was called outside its documented precondition."""
    pass


class ValidityError(FixnetError):
    """A signed digraph is not the SID of any Boolean network."""
    pass


class WitnessError(FixnetError):
    """No network with the requested fixed point could be constructed."""
    pass


class StructureError(FixnetError):
    """A certificate, gadget or network has the wrong shape."""
    pass


class FormatError(FixnetError):
    """Malformed input text."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ArgumentError(FixnetError):
    """An argument value is out of range."""
    pass


class LayoutError(FixnetError):
    """A gadget layout is missing roles or maps them inconsistently."""
    pass


class NamingError(LayoutError):
    """A role name clashes with a reserved gadget role."""
    pass
