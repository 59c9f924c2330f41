from datagen.mixture import Dataset
from riskcore.losses import WeightVector

from .basefit import fit_base
from .hypothesis import MixedStrategy
from .trainconfig import ModelKind, TrainConfig
from .trainer import Trainer, TrainResult


class ERMTrainer(Trainer):
    """Uniform-weight empirical risk minimization with the full SGD budget (``rounds x base_epochs`` passes)."""

    kind = ModelKind.ERM

    def train(self, data: Dataset) -> TrainResult:
        fit_rng, _ = self.cfg.rng_streams()
        uniform = WeightVector.uniform(len(data))
        h = None
        log = []
        for t in range(self.cfg.rounds):
            h = fit_base(data, uniform, self.cfg, fit_rng, init=h)
            log.append(self.record(t, MixedStrategy.point_mass(h), data, alpha=1.0))
        assert h is not None
        return TrainResult(self.kind, MixedStrategy.point_mass(h), log)


def train_erm(data: Dataset, cfg: TrainConfig) -> MixedStrategy:
    return ERMTrainer(cfg).train(data).model
