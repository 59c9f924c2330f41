import dataclasses
import enum
import json
import logging
from pathlib import Path
from typing import Any, Iterable, Iterator, Union

import numpy as np

from exceptions.customexceptions import ParseError

logger = logging.getLogger(__name__)


class JSONEncoder(json.JSONEncoder):
    """
    JSON encoder for the artifacts written by the pipeline.

    Extends the default `json.JSONEncoder` with support for dataclasses (serialized with
    `dataclasses.asdict`, keeping declared field order), enums (serialized by value) and
    numpy scalars and arrays. Floats keep Python's shortest round-trip representation.
    """

    def default(self, o):
        if dataclasses.is_dataclass(o) and not isinstance(o, type):
            return dataclasses.asdict(o)
        if isinstance(o, enum.Enum):
            return o.value
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, np.bool_):
            return bool(o)
        return super().default(o)


def dumps_line(record: Any) -> str:
    """Serializes one record as a compact JSON line (no trailing newline)."""
    return json.dumps(record, ensure_ascii=False, cls=JSONEncoder, separators=(",", ":"))


def dumps_document(document: Any) -> str:
    """Serializes a whole document (model file, report) as indented JSON with a trailing newline."""
    return json.dumps(document, ensure_ascii=False, cls=JSONEncoder, indent=2) + "\n"


def format_as_ndjson(records: Iterable[Any]) -> Iterator[str]:
    """
    Formats an iterable of records into newline-delimited JSON (NDJSON).

    Args:
        records: Dictionaries, dataclasses or anything `JSONEncoder` understands.

    Yields:
        One JSON line per record, each terminated by a newline character.
    """
    for record in records:
        yield dumps_line(record) + "\n"


def write_ndjson(path: Union[str, Path], records: Iterable[Any]) -> int:
    """Writes records as NDJSON and returns the number of lines written."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        for line in format_as_ndjson(records):
            handle.write(line)
            count += 1
    logger.debug("Wrote %d lines to %s", count, path)
    return count


def read_ndjson(path: Union[str, Path]) -> Iterator[tuple[int, dict]]:
    """
    Reads an NDJSON file, yielding ``(line_number, record)`` pairs with 1-based line numbers.

    Raises:
        ParseError: If a line is not a JSON object.
    """
    path = Path(path)
    with path.open("r", encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as error:
                raise ParseError(f"invalid JSON ({error.msg})", line_number, str(path)) from error
            if not isinstance(record, dict):
                raise ParseError("expected a JSON object", line_number, str(path))
            yield line_number, record


def write_document(path: Union[str, Path], document: Any) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_document(document), encoding="utf-8", newline="\n")


def read_document(path: Union[str, Path]) -> dict:
    path = Path(path)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as error:
        raise ParseError(f"invalid JSON ({error.msg})", error.lineno, str(path)) from error
