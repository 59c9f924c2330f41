"""
Audit Stage

Reads the truth-blind trace log, computes the per-agent metrics and SLA status, attributes
every violation, scores the attribution against the truth sidecar and writes both reports,
the attribution document, the per-group accuracy figure and the static report page.
"""

import logging
from dataclasses import dataclass
from typing import Optional

from datagen.datasetio import load_dataset
from raap.attribution import AttributionResult, attribute, score_attribution
from raap.figures import figure_to_svg, group_accuracy_figure, save_svg
from raap.metrics import MetricsSummary, compute_metrics
from raap.page import render_report_page, save_report_page
from raap.reports import OperatorReport, UserReport, emit_operator_report, emit_user_report, save_report
from simnet.corruption import corrupt_traces
from simnet.episode import sla_status
from simnet.slo import SLAStatus
from simnet.traceio import load_traces, load_truth_sidecar
from utils.formatutils import write_document

from .stage import Stage

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class AuditOutcome:
    metrics: MetricsSummary
    sla: dict[str, SLAStatus]
    attribution: AttributionResult
    score: Optional[float]
    user: UserReport
    operator: OperatorReport


class AuditStage(Stage):
    name = "audit"

    async def run(self) -> AuditOutcome:
        traces = load_traces(self.store.require(self.store.traces, "simulate"))
        n_groups = load_dataset(self.store.require(self.store.audit_dataset, "datagen")).n_groups
        if self.config.raap.corrupt > 0:
            traces = corrupt_traces(traces, self.config.raap.corrupt, self.config.raap.corruption_seed)

        metrics = compute_metrics(traces, n_groups)
        sla = {
            agent_id: sla_status([t for t in traces if t.agent_id == agent_id], self.config.slo, n_groups)
            for agent_id in metrics.agent_ids()
        }
        ar = attribute(traces, self.config.raap.severity)
        score = None
        if self.store.truth.is_file():
            score = score_attribution(ar, load_truth_sidecar(self.store.truth))
            logger.info("Attribution score %.4f over %d violations", score, ar.n_violations)
        else:
            logger.warning("No truth sidecar at %s; attribution is not scored", self.store.truth)

        user = emit_user_report(metrics, sla)
        operator = emit_operator_report(metrics, sla, ar, score)
        save_report(self.store.user_report, user)
        save_report(self.store.operator_report, operator)
        write_document(
            self.store.attribution,
            {
                "score": score,
                "n_violations": ar.n_violations,
                "n_attributed": ar.n_attributed,
                "agent_index": ar.agent_index,
                "vendor_index": ar.vendor_index,
                "attributed": {str(ref): agent for ref, agent in ar.attributed.items()},
                "unattributed": {str(ref): reason for ref, reason in ar.unattributed.items()},
            },
        )

        figure = group_accuracy_figure(metrics)
        save_svg(figure, self.store.group_figure)
        figures = {"Per-group accuracy of every agent on the audit distribution": figure_to_svg(figure)}
        for kind in self.config.train.models:
            path = self.store.boundary_figure(kind)
            if path.is_file():
                figures[f"Decision boundary: {kind.value}"] = path.read_text(encoding="utf-8")
        page = render_report_page(user, operator, figures, self.config.raap.max_problem_points)
        save_report_page(self.store.report_page, page)
        return AuditOutcome(metrics, sla, ar, score, user, operator)
