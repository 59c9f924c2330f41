import asyncio
import logging
from typing import Optional, Sequence

from datagen.datasetio import load_dataset
from learners import TrainResult, train_model
from learners.modelio import save_model, save_training_log
from learners.trainconfig import ModelKind

from .artifactstore import ArtifactStore
from .runconfig import RunConfig
from .stage import Stage

logger = logging.getLogger(__name__)


class TrainStage(Stage):
    """Trains the requested models (all configured models by default) on the stored training set."""

    name = "train"

    def __init__(self, config: RunConfig, store: ArtifactStore, kinds: Optional[Sequence[ModelKind]] = None):
        super().__init__(config, store)
        self.kinds = list(kinds) if kinds else list(config.train.models)

    async def run(self) -> dict[ModelKind, TrainResult]:
        data = load_dataset(self.store.require(self.store.train_dataset, "datagen"))
        results = {}
        for kind in self.kinds:
            cfg = self.config.train.config_for(kind)
            result = await asyncio.to_thread(train_model, kind, data, cfg)
            save_model(self.store.model(kind), result, cfg)
            save_training_log(self.store.training_log(kind), result.log)
            results[kind] = result
        return results
