"""
Hypotheses and Mixed Strategies

A hypothesis maps feature vectors to a class-1 probability. The learner's randomized
policy is a `MixedStrategy`: a finite distribution ``q`` over hypotheses whose prediction
is the ``q``-weighted average of its members' probabilities.

Key Components:
- LinearHypothesis: logistic linear classifier ``sigmoid(w . x + b)``, the shared base class
- StumpHypothesis: axis-aligned threshold with hard 0/1 output (AdaBoost members only)
- MixedStrategy: immutable ensemble with Frank-Wolfe style blending
- predict / predict_batch: label and confidence of a mixture
"""

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
from scipy.special import expit

from exceptions.customexceptions import ContractError
from riskcore.losses import SUM_TOLERANCE


@dataclass(frozen=True)
class LinearHypothesis:
    """
    Logistic linear classifier.

    Attributes:
        weights: One coefficient per feature
        bias: Intercept
        trained_rounds: Number of base fits that produced (or warm-started into) these parameters
    """

    weights: tuple[float, ...]
    bias: float
    trained_rounds: int = 0

    def __post_init__(self):
        if not all(np.isfinite(self.weights)) or not np.isfinite(self.bias):
            raise ContractError("hypothesis parameters must be finite")

    @classmethod
    def from_params(cls, theta: np.ndarray, trained_rounds: int = 0) -> "LinearHypothesis":
        """Builds a hypothesis from the stacked parameter vector ``[w_1, ..., w_d, b]``."""
        theta = np.asarray(theta, dtype=float)
        return cls(weights=tuple(float(v) for v in theta[:-1]), bias=float(theta[-1]), trained_rounds=trained_rounds)

    @property
    def params(self) -> np.ndarray:
        return np.array([*self.weights, self.bias], dtype=float)

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        return np.asarray(X, dtype=float) @ np.asarray(self.weights) + self.bias

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return expit(self.decision_function(X))


@dataclass(frozen=True)
class StumpHypothesis:
    """Depth-1 threshold on one feature; predicts class 1 where ``polarity * (x_f - threshold) > 0``."""

    feature: int
    threshold: float
    polarity: int = 1

    def __post_init__(self):
        if self.polarity not in (-1, 1):
            raise ContractError(f"stump polarity must be -1 or 1, got {self.polarity}")

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        column = np.asarray(X, dtype=float)[:, self.feature]
        return (self.polarity * (column - self.threshold) > 0).astype(float)


Hypothesis = Union[LinearHypothesis, StumpHypothesis]


@dataclass(frozen=True, eq=False)
class MixedStrategy:
    """
    A distribution ``q`` over a finite ordered list of hypotheses.

    Instances are immutable: `blend` and `reweighted` return new strategies.
    """

    hypotheses: tuple[Hypothesis, ...]
    q: np.ndarray = field(repr=False)

    def __post_init__(self):
        q = np.array(self.q, dtype=float)
        if not self.hypotheses:
            raise ContractError("a mixed strategy needs at least one hypothesis")
        if q.shape != (len(self.hypotheses),):
            raise ContractError(f"{q.size} mixture weights for {len(self.hypotheses)} hypotheses")
        if np.any(q < 0) or not np.all(np.isfinite(q)) or abs(float(q.sum()) - 1.0) > SUM_TOLERANCE:
            raise ContractError("mixture weights must be a probability distribution")
        q.setflags(write=False)
        object.__setattr__(self, "hypotheses", tuple(self.hypotheses))
        object.__setattr__(self, "q", q)

    def __len__(self) -> int:
        return len(self.hypotheses)

    @classmethod
    def point_mass(cls, h: Hypothesis) -> "MixedStrategy":
        return cls(hypotheses=(h,), q=np.ones(1))

    def blend(self, h: Hypothesis, alpha: float, index: Optional[int] = None) -> "MixedStrategy":
        """
        Returns ``(1 - alpha) * Q + alpha * delta_h``.

        When ``index`` names an existing member, its mass grows instead of ``h`` being appended.
        """
        if not 0.0 <= alpha <= 1.0:
            raise ContractError(f"step size {alpha} outside [0, 1]")
        q = (1.0 - alpha) * self.q
        if index is not None:
            q[index] += alpha
            return MixedStrategy(self.hypotheses, q)
        return MixedStrategy((*self.hypotheses, h), np.append(q, alpha))

    def reweighted(self, q: np.ndarray) -> "MixedStrategy":
        return MixedStrategy(self.hypotheses, q)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        members = np.vstack([h.predict_proba(X) for h in self.hypotheses])
        return self.q @ members


def predict_batch(Q: MixedStrategy, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Labels (ties at 0.5 go to class 1) and confidences ``max(p, 1 - p)`` for every row of ``X``."""
    p = Q.predict_proba(np.atleast_2d(X))
    labels = (p >= 0.5).astype(int)
    return labels, np.maximum(p, 1.0 - p)


def predict(Q: MixedStrategy, x: np.ndarray) -> tuple[int, float]:
    labels, confidences = predict_batch(Q, np.asarray(x, dtype=float).reshape(1, -1))
    return int(labels[0]), float(confidences[0])
