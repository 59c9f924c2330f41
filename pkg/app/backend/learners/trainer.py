"""
Trainer Base Module

Every model of the zoo is produced by a `Trainer`: a deterministic state machine that takes
a dataset and a `TrainConfig` and returns a `TrainResult` (the mixed strategy, a per-round
training log and, for adversarial games, the adversary's history).
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.optimize import minimize_scalar

from datagen.mixture import Dataset
from exceptions.customexceptions import NumericalError
from riskcore.losses import LossVector, WeightVector
from riskcore.oracles import best_response
from riskcore.risk import expected_losses, hypothesis_losses, rai_risk

from .hypothesis import Hypothesis, MixedStrategy
from .trainconfig import ModelKind, TrainConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RoundLog:
    """
    One line of a training log.

    Attributes:
        round: 0-based round index
        alpha: Blend step used this round (1.0 for point-mass trainers)
        explored: Whether the hybrid game reused a sampled member instead of fitting
        mean_loss: Uniform mean of the ensemble's expected per-sample losses
        rai_risk: Worst-case weighted risk of the ensemble under the configured adversary
        group_weights: Online group-DRO group distribution after the round
    """

    round: int
    alpha: float
    explored: bool
    mean_loss: float
    rai_risk: float
    group_weights: Optional[list[float]] = None


@dataclass(eq=False)
class AdversaryState:
    """
    The adversary's side of the hybrid game.

    Attributes:
        pi: Current adversary play (best response to the mixture's expected losses)
        history: ``pi`` after every round
        worst_case: Worst-case weights against each round's selected hypothesis
    """

    pi: WeightVector
    history: list[WeightVector] = field(default_factory=list)
    worst_case: list[WeightVector] = field(default_factory=list)


@dataclass(eq=False)
class TrainResult:
    kind: ModelKind
    model: MixedStrategy
    log: list[RoundLog]
    adversary: Optional[AdversaryState] = None


class Trainer(ABC):
    """
    Abstract base class of the model zoo.

    Subclasses set `kind` and implement `train`. The shared helpers compute the adversary
    response to an ensemble and record one training-log line per round.
    """

    kind: ModelKind

    def __init__(self, cfg: TrainConfig):
        self.cfg = cfg

    @abstractmethod
    def train(self, data: Dataset) -> TrainResult:
        raise NotImplementedError

    def ensemble_losses(self, Q: MixedStrategy, data: Dataset) -> LossVector:
        return expected_losses(Q, data)

    def adversary_weights(self, Q: Optional[MixedStrategy], data: Dataset) -> WeightVector:
        """Best response to the ensemble's expected losses; uniform before the first round."""
        if Q is None:
            return WeightVector.uniform(len(data))
        return best_response(self.ensemble_losses(Q, data), self.cfg.adversary())

    def blended_risk(self, ensemble: LossVector, candidate: LossVector) -> Callable[[float], float]:
        """RAI risk of ``(1 - alpha) * ensemble + alpha * candidate`` as a function of ``alpha``."""
        adversary = self.cfg.adversary()

        def risk(alpha: float) -> float:
            mixed = (1.0 - alpha) * ensemble.losses + alpha * candidate.losses
            return rai_risk(LossVector(mixed, ensemble.group_ids), adversary)

        return risk

    def line_search(self, ensemble: LossVector, candidate: LossVector, upper: float = 1.0) -> float:
        """Step in ``[0, upper]`` minimizing the blended RAI risk (bounded search plus both endpoints)."""
        risk = self.blended_risk(ensemble, candidate)
        result = minimize_scalar(risk, bounds=(0.0, upper), method="bounded", options={"xatol": 1e-6})
        best_alpha, best_risk = float(result.x), float(result.fun)
        for endpoint in (0.0, upper):
            value = risk(endpoint)
            if value < best_risk:
                best_alpha, best_risk = endpoint, value
        return best_alpha

    def guarded_blend(
        self,
        Q: Optional[MixedStrategy],
        h: Hypothesis,
        data: Dataset,
        alpha: float,
        index: Optional[int] = None,
    ) -> tuple[MixedStrategy, float]:
        """
        Blends ``h`` into ``Q`` with the scheduled step ``alpha`` unless that raises the RAI
        risk, in which case the step shrinks to the best one in ``[0, alpha]``. A zero step
        leaves ``Q`` as it was. An empty mixture becomes the point mass on ``h``.
        """
        if Q is None:
            return MixedStrategy.point_mass(h), 1.0
        ensemble, candidate = self.ensemble_losses(Q, data), hypothesis_losses(h, data)
        risk = self.blended_risk(ensemble, candidate)
        if risk(alpha) > risk(0.0):
            shortened = self.line_search(ensemble, candidate, upper=alpha)
            logger.debug("%s step shortened from %.4f to %.4f", self.kind.value, alpha, shortened)
            alpha = shortened
        if alpha == 0.0:
            return Q, 0.0
        return Q.blend(h, alpha, index=index), alpha

    def record(
        self,
        t: int,
        Q: MixedStrategy,
        data: Dataset,
        alpha: float,
        explored: bool = False,
        group_weights: Optional[np.ndarray] = None,
    ) -> RoundLog:
        losses = self.ensemble_losses(Q, data)
        entry = RoundLog(
            round=t,
            alpha=float(alpha),
            explored=explored,
            mean_loss=float(losses.losses.mean()),
            rai_risk=rai_risk(losses, self.cfg.adversary()),
            group_weights=None if group_weights is None else [float(g) for g in group_weights],
        )
        if not (np.isfinite(entry.mean_loss) and np.isfinite(entry.rai_risk)):
            raise NumericalError(f"{self.kind.value} produced a non-finite risk", round_index=t)
        logger.info(
            "%s round %d: alpha=%.4f mean_loss=%.4f rai_risk=%.4f%s",
            self.kind.value,
            t,
            entry.alpha,
            entry.mean_loss,
            entry.rai_risk,
            " (explored)" if explored else "",
        )
        return entry
