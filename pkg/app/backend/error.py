import json
import logging
import sys
from typing import IO, Optional

import pydantic

from exceptions.customexceptions import ParseError, RaapError

logger = logging.getLogger("raapctl")

# Exit status contract of every subcommand
EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2

# Standard error message template for unexpected failures
ERROR_MESSAGE = """The pipeline encountered an unexpected error. Re-run with --verbose to see the full traceback.
Error type: {error_type}
"""


def exit_code_for(error: Exception) -> int:
    """
    Maps an exception to the exit status of the command line contract.

    Validation problems (bad config, bad spec field, malformed artifact, violated
    precondition) are the caller's fault and exit with 1; numerical failures,
    IO failures and anything unexpected exit with 2.
    """
    if isinstance(error, RaapError):
        return error.exit_code
    if isinstance(error, (pydantic.ValidationError, ValueError)):
        return EXIT_VALIDATION
    return EXIT_RUNTIME


def error_dict(error: Exception, command: Optional[str] = None) -> dict:
    """
    Converts an exception into a standardized, machine-readable error dictionary.

    Args:
        error (Exception): The exception to convert
        command (str, optional): The subcommand in which the error occurred

    Returns:
        dict: ``{"error": ..., "type": ..., "exit_code": ...}`` plus ``command``,
        ``field`` or ``line`` when they are known.

    Examples:
        >>> error_dict(ValueError("n_samples must be positive"), command="datagen")
        {'error': 'n_samples must be positive', 'type': 'ValueError', 'exit_code': 1, 'command': 'datagen'}
    """
    known = isinstance(error, (RaapError, pydantic.ValidationError, ValueError, OSError))
    message = str(error) if known else ERROR_MESSAGE.format(error_type=type(error).__name__).strip()
    payload: dict = {"error": message, "type": type(error).__name__, "exit_code": exit_code_for(error)}
    if command:
        payload["command"] = command
    if isinstance(error, pydantic.ValidationError):
        payload["field"] = ".".join(str(part) for part in error.errors()[0]["loc"])
    elif getattr(error, "field", None):
        payload["field"] = error.field  # type: ignore[attr-defined]
    if isinstance(error, ParseError):
        payload["line"] = error.line_number
    return payload


def error_response(error: Exception, command: str, stream: Optional[IO[str]] = None) -> int:
    """
    Logs an error, writes its machine-readable line to standard error and returns the exit status.

    Args:
        error (Exception): The exception raised by the command
        command (str): The subcommand where the error occurred (for logging purposes)
        stream (IO, optional): Where to write the error line. Defaults to ``sys.stderr``.

    Returns:
        int: The exit status the process should terminate with.
    """
    logger.debug("Exception in %s", command, exc_info=error)
    payload = error_dict(error, command)
    print(json.dumps(payload, ensure_ascii=False), file=stream or sys.stderr)
    return payload["exit_code"]
