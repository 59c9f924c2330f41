from functools import wraps
from typing import Any, Callable

from error import EXIT_OK, error_response


def handle_exceptions(command: str):
    """
    Decorator that turns every failure of a CLI command into the exit status contract.

    The wrapped function runs normally; if it raises, the exception is logged, a single
    JSON error line is written to standard error and the matching exit status
    (1 for validation problems, 2 for runtime/numerical problems) is returned instead.
    A command that returns ``None`` is reported as success.

    Args:
        command: Name of the subcommand, echoed in the error line.
    """

    def wrapper(command_fn: Callable[..., Any]) -> Callable[..., int]:
        @wraps(command_fn)
        def decorated_function(*args, **kwargs) -> int:
            try:
                result = command_fn(*args, **kwargs)
            except Exception as error:
                return error_response(error, command)
            return EXIT_OK if result is None else int(result)

        return decorated_function

    return wrapper
