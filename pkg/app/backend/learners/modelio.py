"""
Model File Codec

A model file is an indented JSON document with the keys ``model_kind``, ``hypotheses``
(parameters of every member), ``q``, ``config`` (echo of the `TrainConfig`) and
``training`` (rounds run and the final risks). The per-round training log is written next
to it as line-delimited JSON.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Union

import numpy as np
import pydantic

from exceptions.customexceptions import ParseError
from utils.formatutils import read_document, read_ndjson, write_document, write_ndjson

from .hypothesis import Hypothesis, LinearHypothesis, MixedStrategy, StumpHypothesis
from .trainconfig import ModelKind, TrainConfig
from .trainer import RoundLog, TrainResult

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class ModelFile:
    kind: ModelKind
    model: MixedStrategy
    config: TrainConfig
    training: dict[str, Any]


def _hypothesis_record(h: Hypothesis) -> dict:
    if isinstance(h, StumpHypothesis):
        return {"type": "stump", "feature": h.feature, "threshold": h.threshold, "polarity": h.polarity}
    return {"type": "linear", "weights": list(h.weights), "bias": h.bias, "trained_rounds": h.trained_rounds}


def _parse_hypothesis(record: dict) -> Hypothesis:
    if record.get("type") == "stump":
        return StumpHypothesis(int(record["feature"]), float(record["threshold"]), int(record["polarity"]))
    if record.get("type") == "linear":
        return LinearHypothesis(
            weights=tuple(float(v) for v in record["weights"]),
            bias=float(record["bias"]),
            trained_rounds=int(record.get("trained_rounds", 0)),
        )
    raise ValueError(f"unknown hypothesis type {record.get('type')!r}")


def model_document(result: TrainResult, cfg: TrainConfig) -> dict:
    final = result.log[-1] if result.log else None
    return {
        "model_kind": result.kind.value,
        "hypotheses": [_hypothesis_record(h) for h in result.model.hypotheses],
        "q": result.model.q.tolist(),
        "config": cfg.model_dump(mode="json"),
        "training": {
            "rounds": len(result.log),
            "final_mean_loss": None if final is None else final.mean_loss,
            "final_rai_risk": None if final is None else final.rai_risk,
        },
    }


def save_model(path: Union[str, Path], result: TrainResult, cfg: TrainConfig) -> Path:
    path = Path(path)
    write_document(path, model_document(result, cfg))
    logger.info("Saved %s model with %d members to %s", result.kind.value, len(result.model), path)
    return path


def load_model(path: Union[str, Path]) -> ModelFile:
    """
    Reads a model file written by `save_model`.

    Raises:
        ParseError: If the document is not a valid model file.
    """
    path = Path(path)
    document = read_document(path)
    try:
        hypotheses = tuple(_parse_hypothesis(record) for record in document["hypotheses"])
        return ModelFile(
            kind=ModelKind(document["model_kind"]),
            model=MixedStrategy(hypotheses, np.asarray(document["q"], dtype=float)),
            config=TrainConfig.model_validate(document["config"]),
            training=dict(document.get("training", {})),
        )
    except (KeyError, TypeError, ValueError, pydantic.ValidationError) as error:
        raise ParseError(f"invalid model file ({error})", 1, str(path)) from error


def save_training_log(path: Union[str, Path], log: list[RoundLog]) -> int:
    return write_ndjson(path, log)


def load_training_log(path: Union[str, Path]) -> list[RoundLog]:
    entries = []
    for line_number, record in read_ndjson(path):
        try:
            entries.append(RoundLog(**record))
        except TypeError as error:
            raise ParseError(f"invalid training log record ({error})", line_number, str(path)) from error
    return entries
