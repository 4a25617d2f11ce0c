"""Exception hierarchy shared by all sonine modules."""

from __future__ import annotations


class SonineError(Exception):
    """Base class for every error raised by this package."""


class DomainError(SonineError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class ConvergenceError(SonineError, ArithmeticError):
    """A numerical scheme could not certify its accuracy target."""


class UnsupportedKernelError(SonineError, TypeError):
    """The operation is not defined for this kind of kernel."""


class SingularKernelError(SonineError, ValueError):
    """A kernel that must be bounded at 0 turned out to be singular there."""


class ParseError(SonineError, ValueError):
    """A kernel specification string could not be parsed.

    ``position`` is the 0-based character offset where parsing failed.
    """

    def __init__(self, message: str, text: str, position: int) -> None:
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}: {text!r}")
