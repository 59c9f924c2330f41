import json

import numpy as np
import pydantic
import pytest

from datagen import MixtureSpec, generate
from exceptions.customexceptions import ContractError, ParseError
from learners import (
    TRAINERS,
    AlphaSchedule,
    LinearHypothesis,
    MixedStrategy,
    ModelKind,
    StumpHypothesis,
    TrainConfig,
    fit_base,
    predict,
    predict_batch,
    train_erm,
    train_hybrid,
    train_model,
)
from learners.adaboost import best_stump
from learners.basefit import augment, batch_gradient, batch_objective
from learners.hybrid import ftrl_step
from learners.modelio import load_model, load_training_log, save_model, save_training_log
from learners.raifw import RAIFrankWolfeTrainer
from learners.raigreedy import RAIGreedyTrainer
from riskcore import ConstraintSet, WeightVector


def accuracy(Q: MixedStrategy, data) -> float:
    labels, _ = predict_batch(Q, data.X)
    return float(np.mean(labels == data.y))


def test_batch_gradient_matches_finite_differences():
    rng = np.random.default_rng(0)
    step = 1e-6
    for _ in range(100):
        Xa = augment(rng.normal(size=(20, 2)))
        y = rng.integers(0, 2, size=20).astype(float)
        v = rng.uniform(0.1, 1.0, size=20)
        theta = rng.normal(size=3)
        numeric = np.array(
            [
                (batch_objective(theta + step * e, Xa, y, v, 0.01) - batch_objective(theta - step * e, Xa, y, v, 0.01))
                / (2 * step)
                for e in np.eye(3)
            ]
        )
        np.testing.assert_allclose(batch_gradient(theta, Xa, y, v, 0.01), numeric, rtol=1e-4, atol=1e-7)


def test_fit_base_is_deterministic(separable_data, fast_cfg):
    w = WeightVector.uniform(len(separable_data))
    first = fit_base(separable_data, w, fast_cfg, np.random.default_rng(0))
    second = fit_base(separable_data, w, fast_cfg, np.random.default_rng(0))
    assert first == second


def test_fit_base_separates_separable_data(separable_data, fast_cfg):
    h = fit_base(separable_data, WeightVector.uniform(len(separable_data)), fast_cfg, np.random.default_rng(0), epochs=5)
    assert h.weights[0] > 0
    assert accuracy(MixedStrategy.point_mass(h), separable_data) >= 0.95
    assert h.trained_rounds == 1


def test_fit_base_warm_start_counts_rounds(separable_data, fast_cfg):
    rng = np.random.default_rng(0)
    w = WeightVector.uniform(len(separable_data))
    h = fit_base(separable_data, w, fast_cfg, rng)
    assert fit_base(separable_data, w, fast_cfg, rng, init=h).trained_rounds == 2


def test_fit_base_follows_the_weights(two_rule_data, fast_cfg):
    w = (two_rule_data.group_ids == 1).astype(float)
    h = fit_base(two_rule_data, w, fast_cfg, np.random.default_rng(0), epochs=20)
    assert abs(h.weights[1]) > abs(h.weights[0])
    group1 = two_rule_data.group_ids == 1
    labels, _ = predict_batch(MixedStrategy.point_mass(h), two_rule_data.X[group1])
    assert np.mean(labels == two_rule_data.y[group1]) > 0.9


def test_fit_base_rejects_bad_weights(separable_data, fast_cfg):
    rng = np.random.default_rng(0)
    with pytest.raises(ContractError):
        fit_base(separable_data, np.zeros(len(separable_data)), fast_cfg, rng)
    with pytest.raises(ContractError):
        fit_base(separable_data, np.ones(3), fast_cfg, rng)


@pytest.mark.parametrize("kind", list(ModelKind))
def test_trainers_return_a_distribution(kind, two_rule_data, fast_cfg):
    result = train_model(kind, two_rule_data, fast_cfg)
    assert result.kind is kind
    assert 1 <= len(result.log) <= fast_cfg.rounds
    assert result.model.q.sum() == pytest.approx(1.0)
    assert np.all(result.model.q >= 0)
    assert all(np.isfinite(entry.rai_risk) and entry.rai_risk >= entry.mean_loss - 1e-9 for entry in result.log)


def test_model_sizes(two_rule_data, fast_cfg):
    assert len(train_model(ModelKind.ERM, two_rule_data, fast_cfg).model) == 1
    assert len(train_model(ModelKind.OnlineGDRO, two_rule_data, fast_cfg).model) == 1
    assert len(train_model(ModelKind.Hybrid, two_rule_data, fast_cfg).model) <= fast_cfg.rounds + 1


def test_trainer_registry_covers_every_kind():
    assert set(TRAINERS) == set(ModelKind)


@pytest.mark.parametrize("kind", [ModelKind.ERM, ModelKind.RaiFrankWolfe, ModelKind.Hybrid])
def test_trainers_are_deterministic(kind, two_rule_data, fast_cfg):
    first = train_model(kind, two_rule_data, fast_cfg)
    second = train_model(kind, two_rule_data, fast_cfg)
    np.testing.assert_array_equal(first.model.q, second.model.q)
    assert first.model.hypotheses == second.model.hypotheses
    assert first.log == second.log


def test_best_stump_finds_the_split():
    X = np.array([[0.0], [1.0], [2.0], [3.0]])
    d = np.full(4, 0.25)
    stump, error = best_stump(X, np.array([0, 0, 1, 1]), d)
    assert stump == StumpHypothesis(0, 1.5, 1)
    assert error == 0.0
    stump, error = best_stump(X, np.array([1, 1, 0, 0]), d)
    assert stump == StumpHypothesis(0, 1.5, -1)
    assert error == 0.0


def test_adaboost_is_perfect_on_separable_data(separable_data, fast_cfg):
    result = train_model(ModelKind.AdaBoost, separable_data, fast_cfg)
    assert len(result.log) == 1
    assert accuracy(result.model, separable_data) == 1.0


def test_gdro_keeps_uniform_weights_on_identical_groups(dataset_factory, fast_cfg):
    rng = np.random.default_rng(2)
    X = rng.normal(size=(50, 2))
    y = (X[:, 0] + 0.3 * rng.normal(size=50) > 0).astype(int)
    data = dataset_factory(np.repeat(X, 2, axis=0), np.repeat(y, 2), np.tile([0, 1], 50))
    result = train_model(ModelKind.OnlineGDRO, data, fast_cfg)
    for entry in result.log:
        np.testing.assert_allclose(entry.group_weights, [0.5, 0.5], atol=1e-12)


def test_gdro_upweights_the_harder_group(two_rule_data, fast_cfg):
    # a single linear rule cannot serve both groups; the group weights must move off uniform
    result = train_model(ModelKind.OnlineGDRO, two_rule_data, fast_cfg)
    weights = np.asarray(result.log[-1].group_weights)
    assert weights.sum() == pytest.approx(1.0)
    assert not np.allclose(weights, 0.5)


def test_hybrid_without_exploration_or_ftrl_is_frank_wolfe(two_rule_data):
    cfg = TrainConfig(rounds=5, learning_rate=0.05, seed=11, epsilon0=0.0, eta_ftrl=0.0)
    fw = train_model(ModelKind.RaiFrankWolfe, two_rule_data, cfg)
    hybrid, adversary = train_hybrid(two_rule_data, cfg)
    np.testing.assert_array_equal(hybrid.q, fw.model.q)
    assert hybrid.hypotheses == fw.model.hypotheses
    assert len(adversary.history) == 5
    assert len(adversary.worst_case) == 5


def test_hybrid_exploration_reuses_members(two_rule_data):
    cfg = TrainConfig(rounds=4, learning_rate=0.05, seed=1, epsilon0=1.0, gamma=1.0)
    result = train_model(ModelKind.Hybrid, two_rule_data, cfg)
    assert [entry.explored for entry in result.log] == [False, True, True, True]
    assert len(result.model) == 1


def test_ftrl_step_does_not_increase_risk():
    hypotheses = tuple(LinearHypothesis(weights=(float(i), 0.0), bias=0.0) for i in range(3))
    Q = MixedStrategy(hypotheses, np.array([0.5, 0.3, 0.2]))
    risks = np.array([0.9, 0.2, 0.5])
    improved = ftrl_step(Q, risks, eta=0.5)
    assert improved.q.sum() == pytest.approx(1.0)
    assert improved.q @ risks <= Q.q @ risks
    assert improved.q[1] > Q.q[1]
    assert ftrl_step(Q, risks, eta=0.0) is Q


def test_one_round_rai_greedy_equals_one_round_erm(two_rule_data):
    cfg = TrainConfig(rounds=1, learning_rate=0.05, seed=4)
    greedy = RAIGreedyTrainer(cfg).train(two_rule_data).model
    erm = train_erm(two_rule_data, cfg)
    assert greedy.hypotheses == erm.hypotheses


def test_rai_greedy_risk_is_non_increasing(two_rule_data):
    cfg = TrainConfig(rounds=6, learning_rate=0.05, seed=5, constraint=ConstraintSet.worst_group())
    log = RAIGreedyTrainer(cfg).train(two_rule_data).log
    risks = [entry.rai_risk for entry in log]
    assert all(later <= earlier + 1e-9 for earlier, later in zip(risks, risks[1:]))


def test_rai_fw_follows_the_step_schedule_unless_it_raises_risk(two_rule_data, fast_cfg):
    result = train_model(ModelKind.RaiFrankWolfe, two_rule_data, fast_cfg)
    q = np.ones(1)
    for t, entry in enumerate(result.log):
        assert 0.0 <= entry.alpha <= fast_cfg.alpha(t) + 1e-12
        if t > 0 and entry.alpha > 0:
            q = np.append((1.0 - entry.alpha) * q, entry.alpha)
    np.testing.assert_allclose(result.model.q, q, atol=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_rai_fw_round_risk_is_non_increasing(seed):
    data = generate(MixtureSpec(n_samples=50, n_groups=2, group_skew=(0.5, 0.5)), seed)
    cfg = TrainConfig(seed=seed)
    risks = [entry.rai_risk for entry in train_model(ModelKind.RaiFrankWolfe, data, cfg).log]
    assert all(later <= earlier + 1e-9 for earlier, later in zip(risks, risks[1:]))


def test_guarded_blend_keeps_the_mixture_when_every_step_hurts(separable_data, fast_cfg):
    trainer = RAIFrankWolfeTrainer(fast_cfg)
    good = MixedStrategy.point_mass(LinearHypothesis(weights=(5.0, 0.0), bias=0.0))
    flipped = LinearHypothesis(weights=(-5.0, 0.0), bias=0.0)
    Q, alpha = trainer.guarded_blend(good, flipped, separable_data, 0.5)
    assert Q is good
    assert alpha == 0.0


def test_guarded_blend_takes_the_scheduled_step_when_it_helps(separable_data, fast_cfg):
    trainer = RAIFrankWolfeTrainer(fast_cfg)
    weak = MixedStrategy.point_mass(LinearHypothesis(weights=(0.1, 0.0), bias=0.0))
    strong = LinearHypothesis(weights=(5.0, 0.0), bias=0.0)
    Q, alpha = trainer.guarded_blend(weak, strong, separable_data, 0.5)
    assert alpha == 0.5
    np.testing.assert_allclose(Q.q, [0.5, 0.5])


def test_guarded_blend_starts_an_empty_mixture(separable_data, fast_cfg):
    h = LinearHypothesis(weights=(1.0, 0.0), bias=0.0)
    Q, alpha = RAIFrankWolfeTrainer(fast_cfg).guarded_blend(None, h, separable_data, 0.3)
    assert alpha == 1.0
    assert Q.hypotheses == (h,)


def test_alpha_and_epsilon_schedules():
    cfg = TrainConfig(epsilon0=0.2, gamma=0.5)
    assert cfg.alpha(0) == 1.0
    assert cfg.alpha(1) == pytest.approx(2.0 / 3.0)
    assert cfg.epsilon(2) == pytest.approx(0.05)
    constant = TrainConfig(alpha_schedule=AlphaSchedule.Constant, alpha_constant=0.25)
    assert constant.alpha(0) == 1.0
    assert constant.alpha(3) == 0.25


def test_train_config_rejects_unknown_keys():
    with pytest.raises(pydantic.ValidationError):
        TrainConfig.model_validate({"rounds": 3, "learnig_rate": 0.1})


def test_train_config_adversary_prefers_the_mixture():
    cfg = TrainConfig.model_validate(
        {
            "constraint_mixture": {
                "members": [
                    {"constraint": {"kind": "cvar", "alpha": 0.2}, "weight": 1.0},
                    {"constraint": {"kind": "chi_square"}, "weight": 1.0},
                ]
            }
        }
    )
    assert cfg.adversary() is cfg.constraint_mixture
    assert TrainConfig().adversary() == ConstraintSet.cvar(0.10)


def test_predict_tie_goes_to_class_one():
    Q = MixedStrategy.point_mass(LinearHypothesis(weights=(0.0, 0.0), bias=0.0))
    assert predict(Q, np.array([1.0, -1.0])) == (1, 0.5)


def test_predict_is_symmetric_around_the_boundary():
    Q = MixedStrategy.point_mass(LinearHypothesis(weights=(1.0, 0.0), bias=0.0))
    a_pos, c_pos = predict(Q, np.array([1.0, 0.0]))
    a_neg, c_neg = predict(Q, np.array([-1.0, 0.0]))
    assert (a_pos, a_neg) == (1, 0)
    assert c_pos == pytest.approx(c_neg)


def test_mixed_strategy_blend_and_validation():
    h1 = LinearHypothesis(weights=(1.0, 0.0), bias=0.0)
    h2 = LinearHypothesis(weights=(0.0, 1.0), bias=0.0)
    Q = MixedStrategy.point_mass(h1).blend(h2, 0.25)
    np.testing.assert_allclose(Q.q, [0.75, 0.25])
    np.testing.assert_allclose(Q.blend(h1, 0.5, index=0).q, [0.875, 0.125])
    with pytest.raises(ContractError):
        Q.blend(h2, 1.5)
    with pytest.raises(ContractError):
        MixedStrategy((h1, h2), np.array([0.7, 0.7]))


def test_model_file_round_trip(tmp_path, two_rule_data, fast_cfg):
    result = train_model(ModelKind.RaiFrankWolfe, two_rule_data, fast_cfg)
    path = save_model(tmp_path / "rai-fw.json", result, fast_cfg)
    loaded = load_model(path)
    assert loaded.kind is ModelKind.RaiFrankWolfe
    assert loaded.config == fast_cfg
    assert loaded.model.hypotheses == result.model.hypotheses
    np.testing.assert_array_equal(loaded.model.q, result.model.q)
    assert loaded.training["rounds"] == fast_cfg.rounds

    save_training_log(tmp_path / "rai-fw.log.ndjson", result.log)
    assert load_training_log(tmp_path / "rai-fw.log.ndjson") == result.log


def test_model_file_round_trip_for_stumps(tmp_path, separable_data, fast_cfg):
    result = train_model(ModelKind.AdaBoost, separable_data, fast_cfg)
    loaded = load_model(save_model(tmp_path / "adaboost.json", result, fast_cfg))
    assert loaded.model.hypotheses == result.model.hypotheses


def test_load_model_rejects_garbage(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text(json.dumps({"model_kind": "perceptron", "hypotheses": [], "q": []}), encoding="utf-8")
    with pytest.raises(ParseError):
        load_model(path)
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ParseError):
        load_model(path)
