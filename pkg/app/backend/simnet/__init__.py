from .corruption import corrupt_traces
from .episode import EpisodeRunner, per_group_accuracy, run_episode, sla_status
from .fleet import Agent, Fleet, build_fleet
from .slo import SLAStatus, SLOSpec
from .trace import DecisionTrace, ViolationKind, decision_loss
from .traceio import load_traces, load_truth_sidecar, save_traces, save_truth_sidecar

__all__ = [
    "Agent",
    "DecisionTrace",
    "EpisodeRunner",
    "Fleet",
    "SLAStatus",
    "SLOSpec",
    "ViolationKind",
    "build_fleet",
    "corrupt_traces",
    "decision_loss",
    "load_traces",
    "load_truth_sidecar",
    "per_group_accuracy",
    "run_episode",
    "save_traces",
    "save_truth_sidecar",
    "sla_status",
]
