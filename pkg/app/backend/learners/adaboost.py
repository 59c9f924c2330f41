"""
AdaBoost over decision stumps

Classic exponential reweighting: each round picks the stump with the smallest weighted
error, multiplies the weights of correctly classified samples by ``beta = err / (1 - err)``
and renormalizes. The ensemble votes with weights ``log(1 / beta)``, normalized into ``q``.
"""

import logging
import math

import numpy as np

from datagen.mixture import Dataset

from .hypothesis import MixedStrategy, StumpHypothesis
from .trainconfig import ModelKind, TrainConfig
from .trainer import Trainer, TrainResult

logger = logging.getLogger(__name__)

MIN_ERROR = 1e-10


def best_stump(X: np.ndarray, y: np.ndarray, d: np.ndarray) -> tuple[StumpHypothesis, float]:
    """
    Exhaustive search over features, split points and polarities.

    Split points are midpoints between consecutive distinct values (plus one below the
    minimum); ties in error go to the lowest feature, then the lowest threshold.
    """
    best: tuple[float, StumpHypothesis] = (math.inf, StumpHypothesis(0, 0.0))
    for feature in range(X.shape[1]):
        order = np.argsort(X[:, feature], kind="stable")
        values = X[order, feature]
        positives = np.concatenate([[0.0], np.cumsum(d[order] * (y[order] == 1))])
        negatives = np.concatenate([[0.0], np.cumsum(d[order] * (y[order] == 0))])
        # splitting after the first k sorted samples: "x > threshold -> 1" errs on the
        # positives at or below the split and the negatives above it
        error_up = positives + (negatives[-1] - negatives)
        error_down = negatives + (positives[-1] - positives)
        valid = np.ones(values.size + 1, dtype=bool)
        valid[1:-1] = values[1:] > values[:-1]
        valid[-1] = False
        thresholds = np.concatenate([[values[0] - 1.0], 0.5 * (values[1:] + values[:-1]), [values[-1] + 1.0]])
        for polarity, errors in ((1, error_up), (-1, error_down)):
            candidates = np.where(valid, errors, np.inf)
            k = int(np.argmin(candidates))
            if candidates[k] < best[0] - 1e-15:
                best = (float(candidates[k]), StumpHypothesis(feature, float(thresholds[k]), polarity))
    return best[1], best[0]


class AdaBoostTrainer(Trainer):
    kind = ModelKind.AdaBoost

    def train(self, data: Dataset) -> TrainResult:
        X, y = data.X, data.y
        d = np.full(len(data), 1.0 / len(data))
        stumps: list[StumpHypothesis] = []
        coefficients: list[float] = []
        log = []
        for t in range(self.cfg.rounds):
            stump, error = best_stump(X, y, d)
            if error >= 0.5:
                logger.info("adaboost stopped at round %d: weighted error %.4f", t, error)
                if not stumps:
                    stumps.append(stump)
                    coefficients.append(1.0)
                break
            error = max(error, MIN_ERROR)
            beta = error / (1.0 - error)
            stumps.append(stump)
            coefficients.append(math.log(1.0 / beta))
            Q = MixedStrategy(tuple(stumps), np.array(coefficients) / sum(coefficients))
            log.append(self.record(t, Q, data, alpha=coefficients[-1] / sum(coefficients)))
            if error <= MIN_ERROR:
                break
            correct = stump.predict_proba(X).astype(int) == y
            d = np.where(correct, d * beta, d)
            d = d / d.sum()
        model = MixedStrategy(tuple(stumps), np.array(coefficients) / sum(coefficients))
        return TrainResult(self.kind, model, log)


def train_adaboost(data: Dataset, cfg: TrainConfig) -> MixedStrategy:
    return AdaBoostTrainer(cfg).train(data).model
