"""Exception types shared by the library and the command-line front end."""


class NLComptonError(Exception):
    """Base class for all library errors."""


class ValidationError(NLComptonError, ValueError):
    """An input violates a documented precondition (CLI exit code 2)."""


class DomainError(NLComptonError, ArithmeticError):
    """A computation left its numeric domain (CLI exit code 3)."""
