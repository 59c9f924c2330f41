import logging

from datagen.datasetio import load_dataset
from learners.modelio import load_model
from simnet.episode import EpisodeRunner
from simnet.fleet import Fleet, build_fleet
from simnet.trace import DecisionTrace
from simnet.traceio import save_traces, save_truth_sidecar

from .stage import Stage

logger = logging.getLogger(__name__)


class SimulateStage(Stage):
    """Fields the trained models as vendor agents and streams the audit set through them."""

    name = "simulate"

    def load_fleet(self) -> Fleet:
        models = []
        for kind in self.config.train.models:
            model_file = load_model(self.store.require(self.store.model(kind), f"train --model {kind.value}"))
            models.append((kind, model_file.model))
        assignment = self.config.vendor_assignment()
        owned = {index for indices in assignment.values() for index in indices}
        # unowned models are not fielded; re-index the assignment onto the fielded ones
        fielded = sorted(owned)
        position = {index: k for k, index in enumerate(fielded)}
        return build_fleet(
            [models[index] for index in fielded],
            {vendor: [position[index] for index in indices] for vendor, indices in assignment.items()},
        )

    async def run(self) -> list[DecisionTrace]:
        audit = load_dataset(self.store.require(self.store.audit_dataset, "datagen"))
        fleet = self.load_fleet()
        runner = EpisodeRunner(fleet, self.config.slo)
        traces = runner.run(audit)
        save_traces(self.store.traces, traces)
        violations = save_truth_sidecar(self.store.truth, traces)
        logger.info("Simulated %d decisions by %d agents, %d violations", len(traces), len(fleet), violations)
        return traces
