import logging
from dataclasses import replace
from typing import Sequence

import numpy as np

from exceptions.customexceptions import ValidationError

from .trace import DecisionTrace

logger = logging.getLogger(__name__)

# corrupted losses move by at least this much, well past the linkage tolerance
MIN_PERTURBATION = 1e-3


def corrupt_traces(traces: Sequence[DecisionTrace], fraction: float, seed: int) -> list[DecisionTrace]:
    """
    Perturbs the loss field of ``round(fraction * violations)`` violation records.

    The records are chosen deterministically from ``seed``; everything except ``loss`` is kept.
    """
    if not 0.0 <= fraction <= 1.0:
        raise ValidationError(f"corruption fraction {fraction} outside [0, 1]", field="corrupt")
    violations = [ref for ref, trace in enumerate(traces) if trace.z == 1]
    count = int(round(fraction * len(violations)))
    corrupted = list(traces)
    if count == 0:
        return corrupted
    rng = np.random.default_rng(seed)
    chosen = np.sort(rng.choice(violations, size=count, replace=False))
    for ref in chosen:
        trace = corrupted[ref]
        scale = rng.uniform(0.1, 1.0)
        corrupted[ref] = replace(trace, loss=trace.loss * (1.0 + scale) + MIN_PERTURBATION)
    logger.info("Corrupted %d of %d violation records", count, len(violations))
    return corrupted
