from dataclasses import dataclass
from typing import Optional

import numpy as np

from exceptions.customexceptions import ContractError

SUM_TOLERANCE = 1e-9

# Predicted probabilities are clamped to [PROBABILITY_CLAMP, 1 - PROBABILITY_CLAMP]
PROBABILITY_CLAMP = 1e-7


def clamp_probability(p: np.ndarray) -> np.ndarray:
    return np.clip(p, PROBABILITY_CLAMP, 1.0 - PROBABILITY_CLAMP)


def cross_entropy(p1: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Per-sample binary cross-entropy of the predicted class-1 probability ``p1`` against labels ``y``."""
    p1 = clamp_probability(np.asarray(p1, dtype=float))
    y = np.asarray(y)
    return -np.where(y == 1, np.log(p1), np.log1p(-p1))


@dataclass(frozen=True, eq=False)
class LossVector:
    """
    Per-sample nonnegative losses, optionally aligned with the samples' group ids.

    Attributes:
        losses: ``ℓ(h(x_i), y_i)`` for every sample
        group_ids: Subgroup of every sample (required by the worst-group adversary)
    """

    losses: np.ndarray
    group_ids: Optional[np.ndarray] = None

    def __post_init__(self):
        losses = np.asarray(self.losses, dtype=float)
        if losses.ndim != 1:
            raise ContractError("losses must be a vector")
        if not np.all(np.isfinite(losses)) or np.any(losses < 0):
            raise ContractError("losses must be finite and nonnegative")
        object.__setattr__(self, "losses", losses)
        if self.group_ids is not None:
            group_ids = np.asarray(self.group_ids, dtype=int)
            if group_ids.shape != losses.shape:
                raise ContractError(f"{group_ids.size} group ids for {losses.size} losses")
            object.__setattr__(self, "group_ids", group_ids)

    def __len__(self) -> int:
        return int(self.losses.size)


@dataclass(frozen=True, eq=False)
class WeightVector:
    """A probability distribution over samples (the reweighted empirical distribution)."""

    w: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.w, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ContractError("weights must be a nonempty vector")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ContractError("weights must be finite and nonnegative")
        if abs(float(w.sum()) - 1.0) > SUM_TOLERANCE:
            raise ContractError(f"weights sum to {float(w.sum())!r}, expected 1")
        w.setflags(write=False)
        object.__setattr__(self, "w", w)

    def __len__(self) -> int:
        return int(self.w.size)

    @classmethod
    def uniform(cls, n: int) -> "WeightVector":
        return cls(np.full(n, 1.0 / n))
