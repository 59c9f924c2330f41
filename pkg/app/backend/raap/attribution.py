"""
Violation Attribution

Attributes every SLA violation of a truth-blind trace log to the agent that made the
decision, after validating record linkage:

- the record's sample (``sample_id``, features, label, group) matches the consensus of all
  agents' records at the same step ``t``
- the agent belongs to a single vendor across the log
- the logged loss equals the cross-entropy recomputed from ``a``, ``confidence`` and ``y``
  within `LOSS_TOLERANCE`

Records failing any check stay unattributed. Responsibility indices are severity-weighted
shares of the attributed violations.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field

from exceptions.customexceptions import ContractError
from simnet.trace import DecisionTrace, ViolationKind, decision_loss

logger = logging.getLogger(__name__)

LOSS_TOLERANCE = 1e-6


class SeverityWeights(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    critical_error: float = Field(default=1.0, ge=0.0)
    low_confidence: float = Field(default=0.25, ge=0.0)

    def of(self, kind: ViolationKind) -> float:
        if kind is ViolationKind.CriticalError:
            return self.critical_error
        if kind is ViolationKind.LowConfidence:
            return self.low_confidence
        return 0.0


@dataclass
class AttributionResult:
    """
    Attributes:
        attributed: Violation ref (index in the trace log) to the responsible agent, or None
        unattributed: Refs that failed linkage, with the reason
        agent_index: Severity-weighted share of attributed violations per agent
        vendor_index: Sum of its agents' shares per vendor (sums to 1 when anything was attributed)
    """

    attributed: dict[int, Optional[str]] = field(default_factory=dict)
    unattributed: dict[int, str] = field(default_factory=dict)
    agent_index: dict[str, float] = field(default_factory=dict)
    vendor_index: dict[str, float] = field(default_factory=dict)

    @property
    def n_violations(self) -> int:
        return len(self.attributed)

    @property
    def n_attributed(self) -> int:
        return self.n_violations - len(self.unattributed)


def _sample_key(trace: DecisionTrace) -> tuple:
    return (trace.sample_id, trace.x, trace.y, trace.group_id)


def _consensus(traces: Sequence[DecisionTrace]) -> dict[int, tuple]:
    votes: dict[int, Counter] = {}
    for trace in traces:
        votes.setdefault(trace.t, Counter())[_sample_key(trace)] += 1
    # most_common keeps first-seen order among ties
    return {t: counter.most_common(1)[0][0] for t, counter in votes.items()}


def _vendor_of(traces: Sequence[DecisionTrace]) -> dict[str, Optional[str]]:
    vendors: dict[str, set[str]] = {}
    for trace in traces:
        vendors.setdefault(trace.agent_id, set()).add(trace.vendor_id)
    return {agent_id: next(iter(owners)) if len(owners) == 1 else None for agent_id, owners in vendors.items()}


def linkage_failure(trace: DecisionTrace, consensus: Mapping[int, tuple], vendors: Mapping[str, Optional[str]]) -> Optional[str]:
    if _sample_key(trace) != consensus[trace.t]:
        return "sample does not match the other agents' records at this step"
    if vendors.get(trace.agent_id) is None:
        return "agent is listed under more than one vendor"
    if abs(trace.loss - decision_loss(trace.a, trace.confidence, trace.y)) > LOSS_TOLERANCE:
        return "logged loss inconsistent with the decision"
    return None


def attribute(traces: Sequence[DecisionTrace], severity: Optional[SeverityWeights] = None) -> AttributionResult:
    """
    Attributes the violations of a truth-blind trace log.

    Raises:
        ContractError: If any record still carries its ground-truth cause.
    """
    if any(trace.truth_cause is not None for trace in traces):
        raise ContractError("attribution input must be truth-blind")
    severity = severity or SeverityWeights()
    consensus = _consensus(traces)
    vendors = _vendor_of(traces)

    result = AttributionResult()
    weight_by_agent: dict[str, float] = {}
    for ref, trace in enumerate(traces):
        if trace.z != 1:
            continue
        reason = linkage_failure(trace, consensus, vendors)
        if reason is None:
            result.attributed[ref] = trace.agent_id
            weight_by_agent[trace.agent_id] = weight_by_agent.get(trace.agent_id, 0.0) + severity.of(trace.violation_kind)
        else:
            result.attributed[ref] = None
            result.unattributed[ref] = reason

    total = sum(weight_by_agent.values())
    if total > 0:
        result.agent_index = {agent_id: weight / total for agent_id, weight in sorted(weight_by_agent.items())}
        by_vendor: dict[str, float] = {}
        for agent_id, share in result.agent_index.items():
            vendor = vendors[agent_id]
            assert vendor is not None
            by_vendor[vendor] = by_vendor.get(vendor, 0.0) + share
        vendor_total = sum(by_vendor.values())
        result.vendor_index = {vendor: share / vendor_total for vendor, share in sorted(by_vendor.items())}

    if result.unattributed:
        logger.warning("%d of %d violations could not be attributed", len(result.unattributed), result.n_violations)
    return result


def score_attribution(ar: AttributionResult, truth: Mapping[int, str]) -> float:
    """
    Fraction of violation records whose attributed agent equals the sidecar's truth.

    Raises:
        ContractError: If the sidecar does not list exactly the violation records.
    """
    if set(truth) != set(ar.attributed):
        raise ContractError(
            f"truth sidecar lists {len(truth)} violations, the trace log has {len(ar.attributed)} at other refs"
        )
    if not truth:
        return 1.0
    hits = sum(ar.attributed[ref] == cause for ref, cause in truth.items())
    return hits / len(truth)
