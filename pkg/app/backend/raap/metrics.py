"""
Audit Metrics

Per-agent fairness and compliance metrics computed from a trace log: average accuracy,
worst-group accuracy, their gap (``avg_acc - wg_acc``), violation rates, per-group
accuracies, sizes and margins (mean confidence), and the problem-point table.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from exceptions.customexceptions import ContractError
from simnet.trace import DecisionTrace, ViolationKind

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProblemPoint:
    ref: int
    t: int
    sample_id: int
    group_id: int
    loss: float
    violation_kind: ViolationKind


@dataclass(frozen=True)
class AgentMetrics:
    """
    Metrics of one agent. Group vectors are indexed by group id; groups without decisions
    carry ``None`` accuracy and margin.
    """

    agent_id: str
    vendor_id: str
    avg_acc: float
    wg_acc: float
    gap: float
    low_conf_rate: float
    critical_error_rate: float
    per_group_acc: list[Optional[float]]
    group_sizes: list[int]
    group_margins: list[Optional[float]]
    misses: int
    problem_points: list[ProblemPoint]


@dataclass(frozen=True)
class MetricsSummary:
    n_groups: int
    agents: dict[str, AgentMetrics]

    def agent_ids(self) -> list[str]:
        return list(self.agents)


def _optional(values: np.ndarray, present: np.ndarray) -> list[Optional[float]]:
    return [float(v) if ok else None for v, ok in zip(values, present)]


def agent_metrics(agent_id: str, records: Sequence[tuple[int, DecisionTrace]], n_groups: int) -> AgentMetrics:
    groups = np.array([trace.group_id for _, trace in records], dtype=int)
    if groups.max() >= n_groups:
        raise ContractError(f"{agent_id}: group id {int(groups.max())} outside [0, {n_groups})")
    correct = np.array([trace.a == trace.y for _, trace in records], dtype=float)
    confidence = np.array([trace.confidence for _, trace in records], dtype=float)
    kinds = [trace.violation_kind for _, trace in records]

    sizes = np.bincount(groups, minlength=n_groups)
    present = sizes > 0
    denominator = np.maximum(sizes, 1)
    group_acc = np.bincount(groups, weights=correct, minlength=n_groups) / denominator
    group_margin = np.bincount(groups, weights=confidence, minlength=n_groups) / denominator

    avg_acc = float(correct.mean())
    wg_acc = float(group_acc[present].min())
    misses = kinds.count(ViolationKind.CriticalError)
    problem_points = sorted(
        (
            ProblemPoint(ref, trace.t, trace.sample_id, trace.group_id, trace.loss, trace.violation_kind)
            for ref, trace in records
            if trace.z == 1
        ),
        key=lambda point: (-point.loss, point.ref),
    )
    return AgentMetrics(
        agent_id=agent_id,
        vendor_id=records[0][1].vendor_id,
        avg_acc=avg_acc,
        wg_acc=wg_acc,
        gap=avg_acc - wg_acc,
        low_conf_rate=kinds.count(ViolationKind.LowConfidence) / len(records),
        critical_error_rate=misses / len(records),
        per_group_acc=_optional(group_acc, present),
        group_sizes=[int(s) for s in sizes],
        group_margins=_optional(group_margin, present),
        misses=misses,
        problem_points=problem_points,
    )


def compute_metrics(traces: Sequence[DecisionTrace], n_groups: int) -> MetricsSummary:
    """
    Computes `AgentMetrics` for every agent in the log (in order of first appearance).

    Raises:
        ContractError: If the log is empty or a group id is out of range.
    """
    if not traces:
        raise ContractError("cannot compute metrics of an empty trace log")
    by_agent: dict[str, list[tuple[int, DecisionTrace]]] = {}
    for ref, trace in enumerate(traces):
        by_agent.setdefault(trace.agent_id, []).append((ref, trace))
    agents = {agent_id: agent_metrics(agent_id, records, n_groups) for agent_id, records in by_agent.items()}
    for metrics in agents.values():
        logger.info(
            "%s: avg_acc=%.3f wg_acc=%.3f gap=%.3f misses=%d",
            metrics.agent_id,
            metrics.avg_acc,
            metrics.wg_acc,
            metrics.gap,
            metrics.misses,
        )
    return MetricsSummary(n_groups=n_groups, agents=agents)
