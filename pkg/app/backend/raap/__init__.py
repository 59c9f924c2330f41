from .attribution import AttributionResult, SeverityWeights, attribute, score_attribution
from .metrics import AgentMetrics, MetricsSummary, ProblemPoint, compute_metrics
from .reports import (
    REDACTED_KEYS,
    OperatorReport,
    UserReport,
    collect_keys,
    emit_operator_report,
    emit_user_report,
    remediation_hint,
    save_report,
)

__all__ = [
    "AgentMetrics",
    "AttributionResult",
    "MetricsSummary",
    "OperatorReport",
    "ProblemPoint",
    "REDACTED_KEYS",
    "SeverityWeights",
    "UserReport",
    "attribute",
    "collect_keys",
    "compute_metrics",
    "emit_operator_report",
    "emit_user_report",
    "remediation_hint",
    "save_report",
    "score_attribution",
]
