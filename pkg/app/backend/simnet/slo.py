from enum import Enum
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field


class SLAStatus(str, Enum):
    Compliant = "compliant"
    Violated = "violated"


class SLOSpec(BaseModel):
    """
    Service-level objectives every agent decision is checked against.

    Attributes:
        confidence_floor: A correct decision below this confidence is a low-confidence event
        wg_policy_floor: An agent whose worst-group accuracy falls below this floor violates its SLA
        m: Number of per-decision constraints (confidence and correctness)
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    confidence_floor: float = Field(default=0.6, gt=0.5, lt=1.0)
    wg_policy_floor: float = Field(default=0.65, ge=0.0, le=1.0)
    m: Literal[2] = 2
