from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from riskcore.constraints import AdversarySet, ConstraintMixture, ConstraintSet


class ModelKind(str, Enum):
    ERM = "erm"
    AdaBoost = "adaboost"
    RaiGreedy = "rai-ga"
    RaiFrankWolfe = "rai-fw"
    OnlineGDRO = "gdro"
    Hybrid = "hybrid"


class AlphaSchedule(str, Enum):
    FrankWolfe = "fw"
    Constant = "constant"


def _default_constraint() -> ConstraintSet:
    return ConstraintSet.cvar(0.10)


class TrainConfig(BaseModel):
    """
    Hyperparameters shared by every trainer.

    Defaults: 10 rounds, batches of 32, SGD with momentum 0.9 and weight decay 5e-4,
    CVaR(0.10) adversary, exploration 0.05 decaying by 0.95 per round.

    Attributes:
        rounds: Outer rounds T (boosting rounds, game rounds, ERM passes)
        batch_size: Mini-batch size of the base fit
        learning_rate: SGD step size
        momentum: Heavy-ball coefficient
        weight_decay: L2 coefficient applied to every parameter
        constraint: Adversary constraint set
        constraint_mixture: Optional weighted mixture of constraint sets; replaces ``constraint`` when set
        epsilon0: Initial exploration rate of the hybrid game
        gamma: Per-round decay of the exploration rate
        eta_ftrl: Step of the entropic FTRL policy improvement
        alpha_schedule: ``fw`` for ``2 / (t + 2)`` or ``constant`` for ``alpha_constant``
        base_epochs: Passes over the weighted data per base fit
        warm_start: Start every base fit from the previous round's hypothesis
        gdro_eta: Multiplicative step of the online group-DRO group weights
        cvar_eta, cvar_lambda: Accepted and echoed in model files; no trainer reads them
        seed: Root of every random stream of a training run
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    rounds: int = Field(default=10, gt=0)
    batch_size: int = Field(default=32, gt=0)
    learning_rate: float = Field(default=0.01, gt=0.0)
    momentum: float = Field(default=0.9, ge=0.0, lt=1.0)
    weight_decay: float = Field(default=5e-4, ge=0.0)
    constraint: ConstraintSet = Field(default_factory=_default_constraint)
    constraint_mixture: Optional[ConstraintMixture] = None
    epsilon0: float = Field(default=0.05, ge=0.0, le=1.0)
    gamma: float = Field(default=0.95, gt=0.0, le=1.0)
    eta_ftrl: float = Field(default=0.5, ge=0.0)
    alpha_schedule: AlphaSchedule = AlphaSchedule.FrankWolfe
    alpha_constant: float = Field(default=0.5, gt=0.0, le=1.0)
    base_epochs: int = Field(default=1, gt=0)
    warm_start: bool = True
    gdro_eta: float = Field(default=1.0, gt=0.0)
    cvar_eta: float = 0.0
    cvar_lambda: float = -0.5
    seed: int = 0

    @model_validator(mode="after")
    def _seed_in_range(self):
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        return self

    def adversary(self) -> AdversarySet:
        return self.constraint_mixture if self.constraint_mixture is not None else self.constraint

    def alpha(self, t: int) -> float:
        """Blend step of round ``t`` (0-based); round 0 always replaces the empty mixture."""
        if t == 0:
            return 1.0
        if self.alpha_schedule is AlphaSchedule.Constant:
            return self.alpha_constant
        return 2.0 / (t + 2.0)

    def epsilon(self, t: int) -> float:
        return self.epsilon0 * self.gamma**t

    def rng_streams(self) -> tuple[np.random.Generator, np.random.Generator]:
        """Independent ``(fit, explore)`` generators; fitting never consumes exploration draws."""
        fit_seq, explore_seq = np.random.SeedSequence(self.seed).spawn(2)
        return np.random.default_rng(fit_seq), np.random.default_rng(explore_seq)
