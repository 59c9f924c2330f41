from typing import Protocol, Sequence

import numpy as np

from exceptions.customexceptions import ContractError

from .constraints import AdversarySet
from .losses import LossVector, WeightVector, cross_entropy
from .oracles import best_response


class ScoringHypothesis(Protocol):
    def predict_proba(self, X: np.ndarray) -> np.ndarray: ...


class RandomizedPolicy(Protocol):
    @property
    def hypotheses(self) -> Sequence[ScoringHypothesis]: ...

    @property
    def q(self) -> np.ndarray: ...


class LabelledData(Protocol):
    @property
    def X(self) -> np.ndarray: ...

    @property
    def y(self) -> np.ndarray: ...

    @property
    def group_ids(self) -> np.ndarray: ...

    def __len__(self) -> int: ...


def weighted_risk(lv: LossVector, w: WeightVector) -> float:
    """``sum_i w_i * l_i``; with uniform weights this is the plain mean loss."""
    if len(w) != len(lv):
        raise ContractError(f"{len(w)} weights for {len(lv)} losses")
    return float(np.dot(w.w, lv.losses))


def rai_risk(lv: LossVector, cs: AdversarySet) -> float:
    """Worst-case weighted risk over the constraint set (the adversary's best response value)."""
    return weighted_risk(lv, best_response(lv, cs))


def hypothesis_losses(h: ScoringHypothesis, data: LabelledData) -> LossVector:
    return LossVector(cross_entropy(h.predict_proba(data.X), data.y), data.group_ids)


def member_loss_matrix(Q: RandomizedPolicy, data: LabelledData) -> np.ndarray:
    """Loss of every member on every sample, shape ``(len(Q.hypotheses), n)``."""
    return np.vstack([cross_entropy(h.predict_proba(data.X), data.y) for h in Q.hypotheses])


def expected_losses(Q: RandomizedPolicy, data: LabelledData) -> LossVector:
    """Per-sample loss averaged over the mixture, ``E_{h~Q} l(h(x_i), y_i)``."""
    return LossVector(np.asarray(Q.q) @ member_loss_matrix(Q, data), data.group_ids)


def mixed_risk(Q: RandomizedPolicy, data: LabelledData, w: WeightVector) -> float:
    """
    Expected weighted risk of a randomized policy, ``E_{h~Q} sum_i w_i l(h(x_i), y_i)``.

    Computed exactly as the Q-weighted sum of the members' weighted risks.
    """
    if len(w) != len(data):
        raise ContractError(f"{len(w)} weights for {len(data)} samples")
    per_member = member_loss_matrix(Q, data) @ w.w
    return float(np.dot(np.asarray(Q.q), per_member))
