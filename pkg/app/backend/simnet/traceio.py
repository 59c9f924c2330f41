"""
Trace Log Codec

The trace log is truth-blind line-delimited JSON with the fields ``t``, ``sample_id``,
``agent_id``, ``vendor_id``, ``x0``, ``x1``, ``a``, ``confidence``, ``group_id``, ``y``,
``z``, ``violation_kind`` and ``loss``. Ground-truth causes go to a sidecar file with one
line per violation: ``ref`` (0-based index of the record in the trace log), ``t``,
``agent_id`` and ``truth_cause``.
"""

import logging
from pathlib import Path
from typing import Sequence, Union

from exceptions.customexceptions import ContractError, ParseError
from utils.formatutils import read_ndjson, write_ndjson

from .trace import DecisionTrace, ViolationKind

logger = logging.getLogger(__name__)

TRACE_FIELDS = ("t", "sample_id", "agent_id", "vendor_id", "a", "confidence", "group_id", "y", "z", "violation_kind", "loss")


def trace_record(trace: DecisionTrace) -> dict:
    record: dict = {"t": trace.t, "sample_id": trace.sample_id, "agent_id": trace.agent_id, "vendor_id": trace.vendor_id}
    for k, value in enumerate(trace.x):
        record[f"x{k}"] = value
    record.update(
        a=trace.a,
        confidence=trace.confidence,
        group_id=trace.group_id,
        y=trace.y,
        z=trace.z,
        violation_kind=trace.violation_kind.value,
        loss=trace.loss,
    )
    return record


def save_traces(path: Union[str, Path], traces: Sequence[DecisionTrace]) -> int:
    count = write_ndjson(path, (trace_record(trace) for trace in traces))
    logger.info("Wrote %d trace records to %s", count, path)
    return count


def save_truth_sidecar(path: Union[str, Path], traces: Sequence[DecisionTrace]) -> int:
    return write_ndjson(
        path,
        (
            {"ref": ref, "t": trace.t, "agent_id": trace.agent_id, "truth_cause": trace.truth_cause}
            for ref, trace in enumerate(traces)
            if trace.z == 1
        ),
    )


def _parse_trace(record: dict, line_number: int, path: str) -> DecisionTrace:
    missing = [key for key in TRACE_FIELDS if key not in record]
    if missing:
        raise ParseError(f"trace record lacks {', '.join(missing)}", line_number, path)
    x = []
    k = 0
    while f"x{k}" in record:
        x.append(float(record[f"x{k}"]))
        k += 1
    try:
        trace = DecisionTrace(
            t=int(record["t"]),
            sample_id=int(record["sample_id"]),
            agent_id=str(record["agent_id"]),
            vendor_id=str(record["vendor_id"]),
            x=tuple(x),
            a=int(record["a"]),
            confidence=float(record["confidence"]),
            group_id=int(record["group_id"]),
            y=int(record["y"]),
            z=int(record["z"]),
            violation_kind=ViolationKind(record["violation_kind"]),
            loss=float(record["loss"]),
        )
    except (TypeError, ValueError) as error:
        raise ParseError(f"invalid trace record ({error})", line_number, path) from error
    if trace.z not in (0, 1) or (trace.z == 1) != (trace.violation_kind is not ViolationKind.NONE):
        raise ParseError("violation flag z disagrees with violation_kind", line_number, path)
    if trace.group_id < 0:
        raise ParseError(f"negative group_id {trace.group_id}", line_number, path)
    return trace


def load_traces(path: Union[str, Path]) -> list[DecisionTrace]:
    """Reads a truth-blind trace log (``truth_cause`` is always None)."""
    return [_parse_trace(record, number, str(path)) for number, record in read_ndjson(path)]


def load_truth_sidecar(path: Union[str, Path]) -> dict[int, str]:
    truth: dict[int, str] = {}
    for line_number, record in read_ndjson(path):
        if not isinstance(record.get("ref"), int) or not isinstance(record.get("truth_cause"), str):
            raise ParseError("sidecar lines need an integer ref and a truth_cause", line_number, str(path))
        if record["ref"] in truth:
            raise ContractError(f"sidecar lists ref {record['ref']} twice")
        truth[record["ref"]] = record["truth_cause"]
    return truth
