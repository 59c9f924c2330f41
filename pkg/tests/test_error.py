import io
import json

import pydantic
import pytest

from decorators import handle_exceptions
from error import EXIT_OK, EXIT_RUNTIME, EXIT_VALIDATION, error_dict, error_response, exit_code_for
from exceptions.customexceptions import ContractError, NumericalError, ParseError, ValidationError
from learners.trainconfig import TrainConfig


def pydantic_error() -> pydantic.ValidationError:
    with pytest.raises(pydantic.ValidationError) as error:
        TrainConfig(rounds=0)
    return error.value


@pytest.mark.parametrize(
    "error, code",
    [
        (ValidationError("bad skew", field="group_skew"), EXIT_VALIDATION),
        (ContractError("empty"), EXIT_VALIDATION),
        (ParseError("broken", 3), EXIT_VALIDATION),
        (ValueError("nope"), EXIT_VALIDATION),
        (NumericalError("diverged", residual=1.0), EXIT_RUNTIME),
        (FileNotFoundError("missing"), EXIT_RUNTIME),
        (RuntimeError("boom"), EXIT_RUNTIME),
    ],
)
def test_exit_codes(error, code):
    assert exit_code_for(error) == code


def test_pydantic_errors_are_validation_errors():
    error = pydantic_error()
    assert exit_code_for(error) == EXIT_VALIDATION
    assert error_dict(error)["field"] == "rounds"


def test_error_dict_fields():
    assert error_dict(ValidationError("bad skew", field="group_skew"), "datagen") == {
        "error": "group_skew: bad skew",
        "type": "ValidationError",
        "exit_code": 1,
        "command": "datagen",
        "field": "group_skew",
    }
    parsed = error_dict(ParseError("invalid JSON", 4, "traces.jsonl"))
    assert parsed["line"] == 4
    assert parsed["error"] == "traces.jsonl:4: invalid JSON"


def test_unexpected_errors_hide_their_message():
    payload = error_dict(RuntimeError("secret internals"))
    assert "secret internals" not in payload["error"]
    assert "RuntimeError" in payload["error"]


def test_error_response_writes_one_json_line():
    stream = io.StringIO()
    assert error_response(NumericalError("diverged"), "train", stream) == EXIT_RUNTIME
    lines = stream.getvalue().splitlines()
    assert len(lines) == 1
    assert json.loads(lines[0])["command"] == "train"


def test_handle_exceptions(capsys):
    @handle_exceptions("audit")
    def fails():
        raise ContractError("truth fields present")

    @handle_exceptions("audit")
    def succeeds():
        return None

    assert fails() == EXIT_VALIDATION
    assert json.loads(capsys.readouterr().err)["error"] == "truth fields present"
    assert succeeds() == EXIT_OK
