"""Exception types shared across the package."""

from __future__ import annotations


class SheafcalcError(Exception):
    """Base class for all errors raised by sheafcalc."""


class CategoryError(SheafcalcError):
    """A composition table breaks one of the category laws."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations[:5]) + (" ..." if len(self.violations) > 5 else ""))


class SieveError(SheafcalcError):
    """Root mismatch, wrong codomain, or a set that is not a sieve."""


class TopologyError(SheafcalcError):
    pass


class NotClosedError(SieveError):
    """An Omega operation received a sieve that is not closed for the topology."""


class CapExceeded(SheafcalcError):
    """A configured size guard on an exponential enumeration was hit."""


class FrameError(SheafcalcError):
    pass


class NucleusError(FrameError):
    pass


class ParseError(SheafcalcError):
    """Syntax error in a term or sequent.

    ``token`` is the 1-based index of the offending token and ``column`` its
    0-based offset in the source text.
    """

    def __init__(self, message: str, token: int, column: int, text: str = ""):
        self.token = token
        self.column = column
        self.text = text
        super().__init__(f"{message} at token {token} (column {column})")


class UnknownLogic(SheafcalcError, KeyError):
    def __str__(self) -> str:
        return f"unknown logic {self.args[0]!r}"


class UnboundVariable(SheafcalcError, KeyError):
    def __str__(self) -> str:
        return f"variable {self.args[0]!r} is not bound"


class DocumentError(SheafcalcError):
    """A site or frame document failed to load."""
