"""
Hybrid RAI-Stochastic Game

Each round of the game:

1. Stochastic exploration: with probability ``epsilon_t = epsilon0 * gamma ** t`` reuse a
   member sampled from the current mixture, otherwise fit a fresh hypothesis against the
   previous adversary play.
2. Worst-case weights against the selected hypothesis.
3. RAI update: ``Q_t = (1 - alpha_t) Q_{t-1} + alpha_t delta_{h_t}``, with the same
   risk guard on the step as the Frank-Wolfe trainer.
4. Adversary response ``pi_t``: best response to the mixture's expected losses.
5. Policy improvement: entropic FTRL, ``q_i *= exp(-eta * R_{pi_t}(h_i))``, renormalized.

With ``epsilon0 = 0`` and ``eta_ftrl = 0`` the game is exactly the Frank-Wolfe trainer.
"""

import logging
from typing import Optional

import numpy as np

from datagen.mixture import Dataset
from exceptions.customexceptions import NumericalError
from riskcore.losses import WeightVector
from riskcore.oracles import best_response
from riskcore.risk import hypothesis_losses, member_loss_matrix

from .basefit import fit_base
from .hypothesis import Hypothesis, LinearHypothesis, MixedStrategy
from .trainconfig import ModelKind, TrainConfig
from .trainer import AdversaryState, Trainer, TrainResult

logger = logging.getLogger(__name__)


def ftrl_step(Q: MixedStrategy, member_risks: np.ndarray, eta: float) -> MixedStrategy:
    """Multiplicative-weights policy improvement against fixed per-member risks."""
    if eta == 0.0:
        return Q
    logits = np.log(np.maximum(Q.q, np.finfo(float).tiny)) - eta * member_risks
    logits = np.where(Q.q > 0, logits, -np.inf)
    q = np.exp(logits - logits.max())
    return Q.reweighted(q / q.sum())


class HybridTrainer(Trainer):
    kind = ModelKind.Hybrid

    def train(self, data: Dataset) -> TrainResult:
        cfg = self.cfg
        adversary = cfg.adversary()
        fit_rng, explore_rng = cfg.rng_streams()
        state = AdversaryState(pi=WeightVector.uniform(len(data)))
        Q: Optional[MixedStrategy] = None
        last_fit: Optional[LinearHypothesis] = None
        log = []
        for t in range(cfg.rounds):
            explore = explore_rng.random() < cfg.epsilon(t)
            h: Hypothesis
            index: Optional[int] = None
            if explore and Q is not None:
                index = int(explore_rng.choice(len(Q), p=Q.q))
                h = Q.hypotheses[index]
                logger.debug("hybrid round %d explores member %d", t, index)
            else:
                explore = False
                last_fit = fit_base(data, state.pi, cfg, fit_rng, init=last_fit if cfg.warm_start else None)
                h = last_fit

            state.worst_case.append(best_response(hypothesis_losses(h, data), adversary))

            Q, alpha = self.guarded_blend(Q, h, data, cfg.alpha(t), index=index)

            state.pi = self.adversary_weights(Q, data)
            state.history.append(state.pi)

            member_risks = member_loss_matrix(Q, data) @ state.pi.w
            if not np.all(np.isfinite(member_risks)):
                raise NumericalError("non-finite member risk in the policy update", round_index=t)
            Q = ftrl_step(Q, member_risks, cfg.eta_ftrl)
            log.append(self.record(t, Q, data, alpha, explored=explore))
        assert Q is not None
        return TrainResult(self.kind, Q, log, adversary=state)


def train_hybrid(data: Dataset, cfg: TrainConfig) -> tuple[MixedStrategy, AdversaryState]:
    result = HybridTrainer(cfg).train(data)
    assert result.adversary is not None
    return result.model, result.adversary
