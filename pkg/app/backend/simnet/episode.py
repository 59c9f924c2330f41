"""
Episode Runner

Streams the audit telemetry through every agent of a fleet. The telemetry is exogenous:
an agent's action does not influence the next state. Each decision is checked against the
SLOs (a wrong label is a critical error; a correct label below the confidence floor is a
low-confidence event) and tagged with its ground-truth cause.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from datagen.mixture import Dataset
from exceptions.customexceptions import ContractError
from learners.hypothesis import predict_batch

from .fleet import Agent, Fleet
from .slo import SLAStatus, SLOSpec
from .trace import DecisionTrace, ViolationKind, classify, decision_loss

logger = logging.getLogger(__name__)


@dataclass
class AgentCounters:
    decisions: int = 0
    violations: Counter = field(default_factory=Counter)

    def rate(self, kind: ViolationKind) -> float:
        return self.violations[kind] / self.decisions if self.decisions else 0.0


class EpisodeRunner:
    """
    Runs a fleet over an audit dataset and keeps per-agent violation counters online.

    Traces are produced agent-major, sample-minor; ``t`` is the sample's position in the
    audit stream and is shared by all agents deciding on that sample.
    """

    def __init__(self, fleet: Fleet, slo: SLOSpec):
        if len(fleet) == 0:
            raise ContractError("cannot run an episode with an empty fleet")
        self.fleet = fleet
        self.slo = slo
        self.counters: dict[str, AgentCounters] = {agent.agent_id: AgentCounters() for agent in fleet.agents}

    def run_agent(self, agent: Agent, audit_data: Dataset) -> list[DecisionTrace]:
        labels, confidences = predict_batch(agent.model, audit_data.X)
        counters = self.counters[agent.agent_id]
        traces = []
        for t, sample in enumerate(audit_data.samples):
            a, confidence = int(labels[t]), float(confidences[t])
            kind = classify(a, confidence, sample.y, self.slo.confidence_floor)
            z = int(kind is not ViolationKind.NONE)
            counters.decisions += 1
            counters.violations[kind] += 1
            traces.append(
                DecisionTrace(
                    t=t,
                    sample_id=sample.sample_id,
                    agent_id=agent.agent_id,
                    vendor_id=agent.vendor_id,
                    x=sample.x,
                    a=a,
                    confidence=confidence,
                    group_id=sample.group_id,
                    y=sample.y,
                    z=z,
                    violation_kind=kind,
                    loss=decision_loss(a, confidence, sample.y),
                    truth_cause=agent.agent_id if z else None,
                )
            )
        logger.info(
            "%s: %d critical errors, %d low-confidence events over %d decisions",
            agent.agent_id,
            counters.violations[ViolationKind.CriticalError],
            counters.violations[ViolationKind.LowConfidence],
            counters.decisions,
        )
        return traces

    def run(self, audit_data: Dataset) -> list[DecisionTrace]:
        if len(audit_data) == 0:
            raise ContractError("audit data is empty")
        traces: list[DecisionTrace] = []
        for agent in self.fleet.agents:
            traces.extend(self.run_agent(agent, audit_data))
        return traces

    def rates(self) -> dict[str, dict[str, float]]:
        return {
            agent_id: {
                "low_conf_rate": counters.rate(ViolationKind.LowConfidence),
                "critical_error_rate": counters.rate(ViolationKind.CriticalError),
            }
            for agent_id, counters in self.counters.items()
        }


def run_episode(fleet: Fleet, audit_data: Dataset, slo: SLOSpec) -> list[DecisionTrace]:
    return EpisodeRunner(fleet, slo).run(audit_data)


def per_group_accuracy(traces: Sequence[DecisionTrace], n_groups: int) -> np.ndarray:
    """Accuracy of every group; NaN for groups without decisions."""
    groups = np.array([trace.group_id for trace in traces], dtype=int)
    correct = np.array([trace.a == trace.y for trace in traces], dtype=float)
    hits = np.bincount(groups, weights=correct, minlength=n_groups)
    counts = np.bincount(groups, minlength=n_groups)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(counts > 0, hits / np.maximum(counts, 1), np.nan)


def sla_status(traces: Sequence[DecisionTrace], slo: SLOSpec, n_groups: Optional[int] = None) -> SLAStatus:
    """
    Violated iff the worst group's accuracy is below ``slo.wg_policy_floor``.

    Groups without decisions are ignored (with a warning when ``n_groups`` says they exist).
    """
    if not traces:
        raise ContractError("no traces to judge")
    agents = {trace.agent_id for trace in traces}
    if len(agents) != 1:
        raise ContractError(f"sla_status expects the traces of one agent, got {sorted(agents)}")
    observed = max(trace.group_id for trace in traces) + 1
    accuracy = per_group_accuracy(traces, max(observed, n_groups or 0))
    missing = np.flatnonzero(np.isnan(accuracy)).tolist()
    if missing:
        logger.warning("%s: groups %s have no decisions and are ignored", agents.pop(), missing)
    worst = float(np.nanmin(accuracy))
    return SLAStatus.Violated if worst < slo.wg_policy_floor else SLAStatus.Compliant
