import logging
from typing import Optional

import numpy as np

from datagen.mixture import Dataset
from riskcore.risk import hypothesis_losses

from .basefit import fit_base
from .hypothesis import LinearHypothesis, MixedStrategy
from .trainconfig import ModelKind, TrainConfig
from .trainer import Trainer, TrainResult

logger = logging.getLogger(__name__)


def group_mean_losses(losses: np.ndarray, group_ids: np.ndarray, n_groups: int) -> np.ndarray:
    sums = np.bincount(group_ids, weights=losses, minlength=n_groups)
    counts = np.bincount(group_ids, minlength=n_groups)
    return sums / np.maximum(counts, 1)


def sample_weights(group_weights: np.ndarray, group_ids: np.ndarray, n_groups: int) -> np.ndarray:
    """Spreads each group's weight uniformly over its samples."""
    counts = np.bincount(group_ids, minlength=n_groups)
    return group_weights[group_ids] / counts[group_ids]


class OnlineGDROTrainer(Trainer):
    """
    Online group DRO: group weights follow multiplicative updates ``g_k *= exp(eta * loss_k)``
    and each round's base fit minimizes the induced sample-weighted loss. The returned model
    is a point mass on the running average of the round parameters.
    """

    kind = ModelKind.OnlineGDRO

    def train(self, data: Dataset) -> TrainResult:
        fit_rng, _ = self.cfg.rng_streams()
        k = data.n_groups
        g = np.full(k, 1.0 / k)
        h: Optional[LinearHypothesis] = None
        average = None
        log = []
        for t in range(self.cfg.rounds):
            w = sample_weights(g, data.group_ids, k)
            h = fit_base(data, w, self.cfg, fit_rng, init=h if self.cfg.warm_start else None)
            average = h.params if average is None else average + (h.params - average) / (t + 1)
            group_losses = group_mean_losses(hypothesis_losses(h, data).losses, data.group_ids, k)
            g = g * np.exp(self.cfg.gdro_eta * group_losses)
            g = g / g.sum()
            model = MixedStrategy.point_mass(LinearHypothesis.from_params(average, trained_rounds=t + 1))
            log.append(self.record(t, model, data, alpha=1.0 / (t + 1), group_weights=g))
        assert average is not None
        model = MixedStrategy.point_mass(LinearHypothesis.from_params(average, trained_rounds=self.cfg.rounds))
        return TrainResult(self.kind, model, log)


def train_online_gdro(data: Dataset, cfg: TrainConfig) -> MixedStrategy:
    return OnlineGDROTrainer(cfg).train(data).model
