from typing import Optional

from datagen.mixture import Dataset

from .basefit import fit_base
from .hypothesis import LinearHypothesis, MixedStrategy
from .trainconfig import ModelKind, TrainConfig
from .trainer import Trainer, TrainResult


class RAIFrankWolfeTrainer(Trainer):
    """
    Frank-Wolfe over distributions of hypotheses on the RAI risk of the mixture.

    The linear-minimization oracle is a base fit against the adversary's best response to the
    mixture's expected losses. The step follows ``cfg.alpha`` (``2 / (t + 2)`` by default)
    whenever that does not raise the RAI risk; otherwise it is line-searched on
    ``[0, cfg.alpha(t)]``, so the logged RAI risk never increases.
    """

    kind = ModelKind.RaiFrankWolfe

    def train(self, data: Dataset) -> TrainResult:
        fit_rng, _ = self.cfg.rng_streams()
        Q: Optional[MixedStrategy] = None
        h: Optional[LinearHypothesis] = None
        log = []
        for t in range(self.cfg.rounds):
            w = self.adversary_weights(Q, data)
            h = fit_base(data, w, self.cfg, fit_rng, init=h if self.cfg.warm_start else None)
            Q, alpha = self.guarded_blend(Q, h, data, self.cfg.alpha(t))
            log.append(self.record(t, Q, data, alpha))
        assert Q is not None
        return TrainResult(self.kind, Q, log)


def train_rai_fw(data: Dataset, cfg: TrainConfig) -> MixedStrategy:
    return RAIFrankWolfeTrainer(cfg).train(data).model
