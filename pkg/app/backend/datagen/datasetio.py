"""
Dataset File Codec

Datasets are stored as line-delimited JSON: a header line carrying the spec fingerprint and
the group count, then one record per sample with the fields ``sample_id``, ``x0``, ``x1``
(one ``x<k>`` per feature), ``y`` and ``group_id``, in that order. Numbers use the shortest
decimal that round-trips, so ``load_dataset(save_dataset(D))`` reproduces ``D`` exactly.
"""

import logging
from pathlib import Path
from typing import Union

from exceptions.customexceptions import ParseError, ValidationError
from utils.formatutils import read_ndjson, write_ndjson

from .mixture import Dataset, Sample

logger = logging.getLogger(__name__)

HEADER_KEYS = ("spec_fingerprint", "n_groups", "n_features", "n_samples")


def _header(dataset: Dataset) -> dict:
    return {
        "spec_fingerprint": dataset.spec_fingerprint,
        "n_groups": dataset.n_groups,
        "n_features": len(dataset.samples[0].x),
        "n_samples": len(dataset),
    }


def _record(sample: Sample) -> dict:
    record: dict = {"sample_id": sample.sample_id}
    for k, value in enumerate(sample.x):
        record[f"x{k}"] = value
    record["y"] = sample.y
    record["group_id"] = sample.group_id
    return record


def save_dataset(dataset: Dataset, path: Union[str, Path]) -> Path:
    path = Path(path)
    write_ndjson(path, [_header(dataset), *(_record(sample) for sample in dataset.samples)])
    logger.info("Saved %d samples to %s", len(dataset), path)
    return path


def _parse_int(record: dict, key: str, line_number: int, path: str) -> int:
    value = record.get(key)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"field '{key}' must be an integer, got {value!r}", line_number, path)
    return value


def _parse_sample(record: dict, n_features: int, n_groups: int, line_number: int, path: str) -> Sample:
    sample_id = _parse_int(record, "sample_id", line_number, path)
    label = _parse_int(record, "y", line_number, path)
    group_id = _parse_int(record, "group_id", line_number, path)
    if label not in (0, 1):
        raise ParseError(f"label y must be 0 or 1, got {label}", line_number, path)
    if not 0 <= group_id < n_groups:
        raise ParseError(f"group_id {group_id} outside [0, {n_groups})", line_number, path)
    x = []
    for k in range(n_features):
        value = record.get(f"x{k}")
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ParseError(f"field 'x{k}' must be a number, got {value!r}", line_number, path)
        x.append(float(value))
    return Sample(x=tuple(x), y=label, group_id=group_id, sample_id=sample_id)


def load_dataset(path: Union[str, Path]) -> Dataset:
    """
    Reads a dataset written by `save_dataset`.

    Raises:
        ParseError: On a malformed header or record, naming the line number.
    """
    path = Path(path)
    lines = read_ndjson(path)
    try:
        line_number, header = next(lines)
    except StopIteration:
        raise ParseError("empty dataset file", 1, str(path)) from None
    if any(key not in header for key in HEADER_KEYS):
        raise ParseError(f"header must carry {', '.join(HEADER_KEYS)}", line_number, str(path))
    n_groups = _parse_int(header, "n_groups", line_number, str(path))
    n_features = _parse_int(header, "n_features", line_number, str(path))

    samples = [_parse_sample(record, n_features, n_groups, number, str(path)) for number, record in lines]
    if len(samples) != header["n_samples"]:
        raise ParseError(f"header announces {header['n_samples']} samples, found {len(samples)}", 1, str(path))
    try:
        return Dataset(samples=tuple(samples), n_groups=n_groups, spec_fingerprint=str(header["spec_fingerprint"]))
    except ValidationError as error:
        raise ParseError(str(error), 1, str(path)) from error
