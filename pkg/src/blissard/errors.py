"""Exception hierarchy shared by every subpackage."""

from __future__ import annotations


class BlissardError(Exception):
    """Base class for all library errors."""


class DomainError(BlissardError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ExprSyntaxError(BlissardError):
    """Raised by the parser. Carries the byte offset of the offending token."""

    def __init__(self, message: str, offset: int, text: str = ""):
        self.message = message
        self.offset = offset
        self.text = text
        super().__init__(f"{message} at offset {offset}")


class EvaluationError(BlissardError):
    """Unbound variable, bad arity, or a piecewise argument outside every branch."""


class SeriesError(BlissardError):
    """A summation engine could not produce a value (non-finite term, bad input)."""

    def __init__(self, message: str, index: int | None = None):
        self.index = index
        super().__init__(message if index is None else f"{message} (index {index})")


class ConvergenceError(SeriesError):
    """An accelerated engine failed to stabilise within its budget."""


class CatalogError(BlissardError):
    """Malformed catalog text. ``entry`` and ``line`` locate the problem."""

    def __init__(self, message: str, entry: str | None = None, line: int | None = None):
        self.entry = entry
        self.line = line
        where = []
        if entry is not None:
            where.append(f"entry {entry!r}")
        if line is not None:
            where.append(f"line {line}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
