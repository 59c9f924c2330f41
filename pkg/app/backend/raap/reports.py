"""
Audit Reports

Two redaction-differentiated views of the same audit:

- `UserReport`: per-agent headline metrics, SLA status and a remediation hint
- `OperatorReport`: the user fields plus group-level detail (accuracies, sizes, margins,
  problem points, misses), vendor ownership and responsibility indices

`REDACTED_KEYS` lists the field names that must never appear in a serialized user report.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping, Optional, Union

from exceptions.customexceptions import ContractError
from simnet.slo import SLAStatus
from utils.formatutils import write_document

from .attribution import AttributionResult
from .metrics import AgentMetrics, MetricsSummary, ProblemPoint

logger = logging.getLogger(__name__)

REDACTED_KEYS = frozenset(
    {
        "per_group_acc",
        "group_sizes",
        "group_margins",
        "problem_points",
        "misses",
        "vendor_id",
        "agent_index",
        "vendor_index",
        "attribution",
    }
)

HIGH_GAP = 0.15
HIGH_CRITICAL_RATE = 0.25
HIGH_LOW_CONFIDENCE_RATE = 0.10

RemediationRule = tuple[Callable[[AgentMetrics, SLAStatus], bool], str]

# First matching rule wins
REMEDIATION_RULES: tuple[RemediationRule, ...] = (
    (lambda m, s: s is SLAStatus.Violated and m.gap >= HIGH_GAP, "retrain with group-robust objective"),
    (lambda m, s: s is SLAStatus.Violated, "raise worst-group accuracy before redeployment"),
    (lambda m, s: m.critical_error_rate >= HIGH_CRITICAL_RATE, "review model accuracy on the audit distribution"),
    (lambda m, s: m.low_conf_rate >= HIGH_LOW_CONFIDENCE_RATE, "recalibrate confidence or defer uncertain decisions"),
    (lambda m, s: True, "no action required"),
)


def remediation_hint(metrics: AgentMetrics, status: SLAStatus) -> str:
    return next(hint for applies, hint in REMEDIATION_RULES if applies(metrics, status))


@dataclass(frozen=True)
class UserAgentEntry:
    agent_id: str
    avg_acc: float
    wg_acc: float
    gap: float
    sla_status: SLAStatus
    low_conf_rate: float
    critical_error_rate: float
    remediation_hint: str


@dataclass(frozen=True)
class UserReport:
    agents: list[UserAgentEntry]


@dataclass(frozen=True)
class OperatorAgentEntry:
    agent_id: str
    avg_acc: float
    wg_acc: float
    gap: float
    sla_status: SLAStatus
    low_conf_rate: float
    critical_error_rate: float
    remediation_hint: str
    vendor_id: str
    per_group_acc: list[Optional[float]]
    group_sizes: list[int]
    group_margins: list[Optional[float]]
    misses: int
    agent_index: float
    problem_points: list[ProblemPoint]


@dataclass(frozen=True)
class AttributionSummary:
    n_violations: int
    n_attributed: int
    unattributed: dict[str, str]
    vendor_index: dict[str, float]
    score: Optional[float] = None


@dataclass(frozen=True)
class OperatorReport:
    agents: list[OperatorAgentEntry]
    attribution: AttributionSummary


def _status(sla: Mapping[str, SLAStatus], agent_id: str) -> SLAStatus:
    if agent_id not in sla:
        raise ContractError(f"no SLA status for {agent_id}")
    return sla[agent_id]


def _user_entry(m: AgentMetrics, status: SLAStatus) -> UserAgentEntry:
    return UserAgentEntry(
        agent_id=m.agent_id,
        avg_acc=m.avg_acc,
        wg_acc=m.wg_acc,
        gap=m.gap,
        sla_status=status,
        low_conf_rate=m.low_conf_rate,
        critical_error_rate=m.critical_error_rate,
        remediation_hint=remediation_hint(m, status),
    )


def emit_user_report(ms: MetricsSummary, sla: Mapping[str, SLAStatus]) -> UserReport:
    return UserReport(agents=[_user_entry(m, _status(sla, agent_id)) for agent_id, m in ms.agents.items()])


def emit_operator_report(
    ms: MetricsSummary, sla: Mapping[str, SLAStatus], ar: AttributionResult, score: Optional[float] = None
) -> OperatorReport:
    entries = []
    for agent_id, m in ms.agents.items():
        user = _user_entry(m, _status(sla, agent_id))
        entries.append(
            OperatorAgentEntry(
                **vars(user),
                vendor_id=m.vendor_id,
                per_group_acc=m.per_group_acc,
                group_sizes=m.group_sizes,
                group_margins=m.group_margins,
                misses=m.misses,
                agent_index=ar.agent_index.get(agent_id, 0.0),
                problem_points=m.problem_points,
            )
        )
    summary = AttributionSummary(
        n_violations=ar.n_violations,
        n_attributed=ar.n_attributed,
        unattributed={str(ref): reason for ref, reason in sorted(ar.unattributed.items())},
        vendor_index=dict(ar.vendor_index),
        score=score,
    )
    return OperatorReport(agents=entries, attribution=summary)


def collect_keys(document) -> set[str]:
    """Every mapping key anywhere in a JSON-like document."""
    if isinstance(document, dict):
        keys = set(document)
        for value in document.values():
            keys |= collect_keys(value)
        return keys
    if isinstance(document, list):
        return set().union(*(collect_keys(item) for item in document)) if document else set()
    return set()


def save_report(path: Union[str, Path], report: Union[UserReport, OperatorReport]) -> Path:
    path = Path(path)
    write_document(path, report)
    logger.info("Wrote %s to %s", type(report).__name__, path)
    return path
