"""Exception types shared across the package."""

from __future__ import annotations


class H6Error(Exception):
    """Base class for all package errors."""


class ParseError(H6Error, ValueError):
    def __init__(self, message: str, text: str = "", position: int = 0) -> None:
        self.text = text
        self.position = position
        if text:
            message = f"{message} at position {position}: {text!r}"
        super().__init__(message)


class ParabolicWord(H6Error, ArithmeticError):
    """The word's matrix is parabolic, so its periodic value is a cusp."""


class ParabolicPoint(H6Error, ArithmeticError):
    """An expansion hit a cylinder endpoint (a point of sqrt(3)*Q)."""


class NoPeriodFound(H6Error, ArithmeticError):
    pass


class NotExtremal(H6Error, ValueError):
    pass


class EmptyLanguage(H6Error, ValueError):
    pass


class InvalidClaim(H6Error, ValueError):
    pass
