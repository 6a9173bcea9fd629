"""
Exception hierarchy shared by the library, the CLI and the HTTP service.
The CLI maps these onto exit codes; the service maps them onto status codes.
"""

from typing import Optional


class QSDError(Exception):
    """Base class for all QSD Engine errors"""

    exit_code = 1


class ParseError(QSDError, ValueError):
    """Malformed input text; carries the offending line number when known"""

    exit_code = 2

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class ValidationError(QSDError, ValueError):
    """Inputs parse but are inconsistent (dimensions, widths, alphabet)"""

    exit_code = 3


class AlphabetError(ValidationError):
    """An operator code is not allowed in the requested mode"""


class IndexWidthError(ValidationError):
    """A sparse matrix does not fit in the configured index width"""


class ConvergenceError(QSDError):
    """Raised by front ends when the eigensolver stopped without converging"""

    exit_code = 4
