from typing import Optional


class RaapError(Exception):
    """Base class for every error raised by the audit pipeline."""

    exit_code = 2


class ValidationError(RaapError):
    """An input, a config value or a spec field is invalid. Names the offending field."""

    exit_code = 1

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message)
        self.field = field

    def __str__(self) -> str:
        message = super().__str__()
        return f"{self.field}: {message}" if self.field else message


class ContractError(RaapError):
    """A precondition of a library operation was violated by the caller."""

    exit_code = 1


class ParseError(RaapError):
    """A line of a line-delimited artifact could not be parsed."""

    exit_code = 1

    def __init__(self, message: str, line_number: int, path: Optional[str] = None):
        super().__init__(message)
        self.line_number = line_number
        self.path = path

    def __str__(self) -> str:
        where = f"{self.path}:{self.line_number}" if self.path else f"line {self.line_number}"
        return f"{where}: {super().__str__()}"


class NumericalError(RaapError):
    """A numerical routine failed to converge or produced a non-finite value."""

    exit_code = 2

    def __init__(self, message: str, residual: Optional[float] = None, round_index: Optional[int] = None):
        super().__init__(message)
        self.residual = residual
        self.round_index = round_index
