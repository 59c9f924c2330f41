from typing import Optional

from datagen.mixture import Dataset
from riskcore.risk import hypothesis_losses

from .basefit import fit_base
from .hypothesis import LinearHypothesis, MixedStrategy
from .trainconfig import ModelKind, TrainConfig
from .trainer import Trainer, TrainResult


class RAIGreedyTrainer(Trainer):
    """
    Greedy RAI game: each round fits a hypothesis against the adversary's best response to
    the current ensemble and blends it in with the step that minimizes the ensemble's RAI
    risk (bounded line search on ``[0, 1]``). The step is never worse than keeping the
    ensemble unchanged, so the logged RAI risk is non-increasing.
    """

    kind = ModelKind.RaiGreedy

    def train(self, data: Dataset) -> TrainResult:
        fit_rng, _ = self.cfg.rng_streams()
        Q: Optional[MixedStrategy] = None
        h: Optional[LinearHypothesis] = None
        log = []
        for t in range(self.cfg.rounds):
            w = self.adversary_weights(Q, data)
            h = fit_base(data, w, self.cfg, fit_rng, init=h if self.cfg.warm_start else None)
            if Q is None:
                alpha = 1.0
                Q = MixedStrategy.point_mass(h)
            else:
                alpha = self.line_search(self.ensemble_losses(Q, data), hypothesis_losses(h, data))
                Q = Q.blend(h, alpha)
            log.append(self.record(t, Q, data, alpha))
        assert Q is not None
        return TrainResult(self.kind, Q, log)


def train_rai_greedy(data: Dataset, cfg: TrainConfig) -> MixedStrategy:
    return RAIGreedyTrainer(cfg).train(data).model
