from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from riskcore.losses import cross_entropy


class ViolationKind(str, Enum):
    NONE = "none"
    LowConfidence = "low_confidence"
    CriticalError = "critical_error"


@dataclass(frozen=True)
class DecisionTrace:
    """
    One audit-log record: the telemetry an agent saw, the action it took, the resulting state
    summary (confidence, group, true label) and whether an SLO was violated.

    ``truth_cause`` is known only to the simulator and is stripped from the audit input.
    """

    t: int
    sample_id: int
    agent_id: str
    vendor_id: str
    x: tuple[float, ...]
    a: int
    confidence: float
    group_id: int
    y: int
    z: int
    violation_kind: ViolationKind
    loss: float
    truth_cause: Optional[str] = None


def class1_probability(a: int, confidence: float) -> float:
    return confidence if a == 1 else 1.0 - confidence


def decision_loss(a: int, confidence: float, y: int) -> float:
    """Cross-entropy of a decision, recovered from its action and confidence."""
    return float(cross_entropy(np.array([class1_probability(a, confidence)]), np.array([y]))[0])


def classify(a: int, confidence: float, y: int, confidence_floor: float) -> ViolationKind:
    if a != y:
        return ViolationKind.CriticalError
    if confidence < confidence_floor:
        return ViolationKind.LowConfidence
    return ViolationKind.NONE
