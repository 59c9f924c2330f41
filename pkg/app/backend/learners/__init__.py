from datagen.mixture import Dataset

from .adaboost import AdaBoostTrainer, train_adaboost
from .basefit import fit_base
from .erm import ERMTrainer, train_erm
from .gdro import OnlineGDROTrainer, train_online_gdro
from .hybrid import HybridTrainer, train_hybrid
from .hypothesis import LinearHypothesis, MixedStrategy, StumpHypothesis, predict, predict_batch
from .raifw import RAIFrankWolfeTrainer, train_rai_fw
from .raigreedy import RAIGreedyTrainer, train_rai_greedy
from .trainconfig import AlphaSchedule, ModelKind, TrainConfig
from .trainer import AdversaryState, RoundLog, Trainer, TrainResult

TRAINERS: dict[ModelKind, type[Trainer]] = {
    ModelKind.ERM: ERMTrainer,
    ModelKind.AdaBoost: AdaBoostTrainer,
    ModelKind.RaiGreedy: RAIGreedyTrainer,
    ModelKind.RaiFrankWolfe: RAIFrankWolfeTrainer,
    ModelKind.OnlineGDRO: OnlineGDROTrainer,
    ModelKind.Hybrid: HybridTrainer,
}


def train_model(kind: ModelKind, data: Dataset, cfg: TrainConfig) -> TrainResult:
    return TRAINERS[kind](cfg).train(data)


__all__ = [
    "AdversaryState",
    "AlphaSchedule",
    "LinearHypothesis",
    "MixedStrategy",
    "ModelKind",
    "RoundLog",
    "StumpHypothesis",
    "TRAINERS",
    "TrainConfig",
    "TrainResult",
    "Trainer",
    "fit_base",
    "predict",
    "predict_batch",
    "train_adaboost",
    "train_erm",
    "train_hybrid",
    "train_model",
    "train_online_gdro",
    "train_rai_fw",
    "train_rai_greedy",
]
