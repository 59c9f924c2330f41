"""
Weighted Base Fit

The inner minimization of every game: a logistic linear hypothesis trained by mini-batch
SGD with heavy-ball momentum and L2 weight decay on the ``w``-weighted cross-entropy.
Batches are drawn with replacement with probabilities proportional to ``w``, so each
batch gradient is an unbiased estimate of the weighted risk gradient.
"""

import logging
import math
from typing import Optional, Union

import numpy as np

from datagen.mixture import Dataset
from exceptions.customexceptions import ContractError, NumericalError
from riskcore.losses import WeightVector

from .hypothesis import LinearHypothesis
from .trainconfig import TrainConfig

logger = logging.getLogger(__name__)


def augment(X: np.ndarray) -> np.ndarray:
    """Appends the constant feature that multiplies the bias."""
    X = np.asarray(X, dtype=float)
    return np.hstack([X, np.ones((X.shape[0], 1))])


def batch_objective(theta: np.ndarray, Xa: np.ndarray, y: np.ndarray, v: np.ndarray, weight_decay: float) -> float:
    """
    ``sum_i v_i * ce_i / sum_i v_i + 0.5 * weight_decay * |theta|^2`` on augmented features ``Xa``.

    The cross-entropy is evaluated in logit form, ``log(1 + e^z) - y z``.
    """
    z = Xa @ theta
    ce = np.logaddexp(0.0, z) - y * z
    return float(np.dot(v, ce) / v.sum() + 0.5 * weight_decay * np.dot(theta, theta))


def batch_gradient(theta: np.ndarray, Xa: np.ndarray, y: np.ndarray, v: np.ndarray, weight_decay: float) -> np.ndarray:
    """Analytic gradient of `batch_objective`."""
    residual = 1.0 / (1.0 + np.exp(-(Xa @ theta))) - y
    return (v * residual) @ Xa / v.sum() + weight_decay * theta


def _weights_as_probabilities(w: Union[WeightVector, np.ndarray], n: int) -> np.ndarray:
    p = np.asarray(w.w if isinstance(w, WeightVector) else w, dtype=float)
    if p.shape != (n,):
        raise ContractError(f"{p.size} weights for {n} samples")
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise ContractError("sample weights must be finite and nonnegative")
    total = p.sum()
    if total <= 0:
        raise ContractError("sample weights are all zero")
    return p / total


def fit_base(
    data: Dataset,
    w: Union[WeightVector, np.ndarray],
    cfg: TrainConfig,
    rng: np.random.Generator,
    init: Optional[LinearHypothesis] = None,
    epochs: Optional[int] = None,
) -> LinearHypothesis:
    """
    Minimizes the ``w``-weighted cross-entropy of a linear hypothesis.

    Args:
        data: Training samples
        w: Sample weights (need not be normalized, must not be all zero)
        cfg: Batch size, learning rate, momentum and weight decay
        rng: Source of the batch draws; consumed deterministically
        init: Warm start; zero parameters when omitted
        epochs: Passes over the data, ``cfg.base_epochs`` when omitted

    Raises:
        ContractError: On misaligned or all-zero weights.
        NumericalError: If the parameters diverge.
    """
    n = len(data)
    p = _weights_as_probabilities(w, n)
    Xa = augment(data.X)
    y = data.y.astype(float)
    epochs = cfg.base_epochs if epochs is None else epochs

    theta = np.zeros(Xa.shape[1]) if init is None else init.params
    velocity = np.zeros_like(theta)
    batch_size = min(cfg.batch_size, n)
    steps_per_epoch = math.ceil(n / batch_size)
    ones = np.ones(batch_size)
    for _ in range(epochs * steps_per_epoch):
        batch = rng.choice(n, size=batch_size, replace=True, p=p)
        grad = batch_gradient(theta, Xa[batch], y[batch], ones, cfg.weight_decay)
        velocity = cfg.momentum * velocity + grad
        theta = theta - cfg.learning_rate * velocity
    if not np.all(np.isfinite(theta)):
        raise NumericalError("base fit diverged", residual=float("nan"))

    previous_rounds = 0 if init is None else init.trained_rounds
    logger.debug("Base fit: %d steps, params %s", epochs * steps_per_epoch, theta)
    return LinearHypothesis.from_params(theta, trained_rounds=previous_rounds + 1)
