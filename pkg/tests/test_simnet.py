import dataclasses
import json
import logging
import math

import numpy as np
import pydantic
import pytest

from exceptions.customexceptions import ContractError, ParseError, ValidationError
from learners.hypothesis import LinearHypothesis, MixedStrategy
from learners.trainconfig import ModelKind
from simnet import (
    EpisodeRunner,
    SLAStatus,
    SLOSpec,
    ViolationKind,
    build_fleet,
    corrupt_traces,
    load_traces,
    load_truth_sidecar,
    per_group_accuracy,
    run_episode,
    save_traces,
    save_truth_sidecar,
    sla_status,
)
from simnet.trace import classify, decision_loss


@pytest.fixture
def audit_data(dataset_factory):
    # sample 2 sits just right of the oracle's boundary: correct but unsure
    return dataset_factory([[1.0, 0.0], [-1.0, 0.0], [0.005, 0.0], [2.0, 1.0]], [1, 0, 1, 1], [0, 1, 0, 1])


@pytest.fixture
def episode(two_agent_fleet, audit_data, slo):
    return run_episode(two_agent_fleet, audit_data, slo)


def test_decision_loss_is_cross_entropy():
    assert decision_loss(1, 0.8, 1) == pytest.approx(-math.log(0.8))
    assert decision_loss(0, 0.8, 1) == pytest.approx(-math.log(0.2))
    assert decision_loss(0, 0.8, 0) == pytest.approx(-math.log(0.8))


def test_classify():
    assert classify(1, 0.9, 0, 0.6) is ViolationKind.CriticalError
    assert classify(1, 0.55, 1, 0.6) is ViolationKind.LowConfidence
    assert classify(0, 0.6, 0, 0.6) is ViolationKind.NONE


def test_slo_floor_must_exceed_one_half():
    with pytest.raises(pydantic.ValidationError):
        SLOSpec(confidence_floor=0.5)


def test_build_fleet_names_agents_in_order(two_agent_fleet):
    assert [agent.agent_id for agent in two_agent_fleet.agents] == ["agent-1", "agent-2"]
    assert two_agent_fleet.vendor_map == {"vendor-a": ["agent-1"], "vendor-b": ["agent-2"]}
    assert two_agent_fleet.agent("agent-2").model_kind is ModelKind.Hybrid
    with pytest.raises(ContractError):
        two_agent_fleet.agent("agent-9")


def test_build_fleet_rejects_bad_ownership(oracle_model):
    models = [(ModelKind.ERM, oracle_model), (ModelKind.AdaBoost, oracle_model)]
    with pytest.raises(ContractError):
        build_fleet(models, {"vendor-a": [0, 1], "vendor-b": [1]})
    with pytest.raises(ContractError):
        build_fleet(models, {"vendor-a": [0]})
    with pytest.raises(ContractError):
        build_fleet(models, {"vendor-a": [0, 1, 2]})
    with pytest.raises(ContractError):
        build_fleet([], {"vendor-a": []})


def test_episode_traces(episode):
    assert len(episode) == 8
    assert [trace.agent_id for trace in episode] == ["agent-1"] * 4 + ["agent-2"] * 4
    assert [trace.t for trace in episode] == [0, 1, 2, 3] * 2
    assert [trace.violation_kind for trace in episode] == [
        ViolationKind.NONE,
        ViolationKind.NONE,
        ViolationKind.LowConfidence,
        ViolationKind.NONE,
        ViolationKind.CriticalError,
        ViolationKind.NONE,
        ViolationKind.CriticalError,
        ViolationKind.CriticalError,
    ]
    for trace in episode:
        assert trace.z == int(trace.violation_kind is not ViolationKind.NONE)
        assert trace.truth_cause == (trace.agent_id if trace.z else None)
        assert trace.loss == pytest.approx(decision_loss(trace.a, trace.confidence, trace.y))
        assert trace.vendor_id == ("vendor-a" if trace.agent_id == "agent-1" else "vendor-b")


def test_episode_runner_rates(two_agent_fleet, audit_data, slo):
    runner = EpisodeRunner(two_agent_fleet, slo)
    runner.run(audit_data)
    assert runner.rates() == {
        "agent-1": {"low_conf_rate": 0.25, "critical_error_rate": 0.0},
        "agent-2": {"low_conf_rate": 0.0, "critical_error_rate": 0.75},
    }


def test_episode_is_deterministic(two_agent_fleet, audit_data, slo):
    assert run_episode(two_agent_fleet, audit_data, slo) == run_episode(two_agent_fleet, audit_data, slo)


def test_per_group_accuracy(episode):
    np.testing.assert_allclose(per_group_accuracy(episode[4:], 2), [0.0, 0.5])
    assert np.isnan(per_group_accuracy(episode[:4], 3)[2])


def test_sla_status(episode, slo):
    assert sla_status(episode[:4], slo) is SLAStatus.Compliant
    assert sla_status(episode[4:], slo) is SLAStatus.Violated
    with pytest.raises(ContractError):
        sla_status(episode, slo)
    with pytest.raises(ContractError):
        sla_status([], slo)


def test_sla_status_warns_about_missing_groups(episode, slo, caplog):
    with caplog.at_level(logging.WARNING, logger="simnet.episode"):
        assert sla_status(episode[:4], slo, n_groups=3) is SLAStatus.Compliant
    assert "groups [2]" in caplog.text


def test_trace_log_round_trip(tmp_path, episode):
    path = tmp_path / "traces.ndjson"
    assert save_traces(path, episode) == 8
    assert "truth_cause" not in path.read_text(encoding="utf-8")
    first = json.loads(path.read_text(encoding="utf-8").splitlines()[0])
    assert list(first) == [
        "t",
        "sample_id",
        "agent_id",
        "vendor_id",
        "x0",
        "x1",
        "a",
        "confidence",
        "group_id",
        "y",
        "z",
        "violation_kind",
        "loss",
    ]
    assert load_traces(path) == [dataclasses.replace(trace, truth_cause=None) for trace in episode]


def test_truth_sidecar(tmp_path, episode):
    path = tmp_path / "truth.ndjson"
    assert save_truth_sidecar(path, episode) == 4
    assert load_truth_sidecar(path) == {2: "agent-1", 4: "agent-2", 6: "agent-2", 7: "agent-2"}


def test_truth_sidecar_refs_are_zero_based_trace_indices(tmp_path, episode):
    save_traces(tmp_path / "traces.ndjson", episode)
    save_truth_sidecar(tmp_path / "truth.ndjson", episode)
    traces = load_traces(tmp_path / "traces.ndjson")
    lines = (tmp_path / "traces.ndjson").read_text(encoding="utf-8").splitlines()
    for ref in load_truth_sidecar(tmp_path / "truth.ndjson"):
        assert traces[ref].z == 1
        assert json.loads(lines[ref])["t"] == traces[ref].t


def test_truth_sidecar_rejects_duplicates(tmp_path):
    path = tmp_path / "truth.ndjson"
    line = json.dumps({"ref": 1, "t": 1, "agent_id": "agent-1", "truth_cause": "agent-1"})
    path.write_text(f"{line}\n{line}\n", encoding="utf-8")
    with pytest.raises(ContractError):
        load_truth_sidecar(path)


def test_load_traces_checks_the_violation_flag(tmp_path, episode):
    path = tmp_path / "traces.ndjson"
    save_traces(path, episode)
    lines = path.read_text(encoding="utf-8").splitlines()
    record = json.loads(lines[4])
    record["z"] = 0
    lines[4] = json.dumps(record)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    with pytest.raises(ParseError) as error:
        load_traces(path)
    assert error.value.line_number == 5


def test_load_traces_needs_every_field(tmp_path):
    path = tmp_path / "traces.ndjson"
    path.write_text(json.dumps({"t": 0, "agent_id": "agent-1"}) + "\n", encoding="utf-8")
    with pytest.raises(ParseError):
        load_traces(path)


def test_corruption_perturbs_violation_losses_only(episode):
    corrupted = corrupt_traces(episode, 1.0, seed=0)
    for original, changed in zip(episode, corrupted):
        if original.z:
            assert changed.loss > original.loss
            assert dataclasses.replace(changed, loss=original.loss) == original
        else:
            assert changed == original


def test_corruption_fraction(episode):
    corrupted = corrupt_traces(episode, 0.5, seed=3)
    assert sum(a.loss != b.loss for a, b in zip(episode, corrupted)) == 2
    assert corrupt_traces(episode, 0.5, seed=3) == corrupted
    assert corrupt_traces(episode, 0.0, seed=3) == list(episode)


def test_corruption_fraction_is_validated(episode):
    with pytest.raises(ValidationError) as error:
        corrupt_traces(episode, 1.5, seed=0)
    assert error.value.field == "corrupt"


def test_constant_agent_never_reports_low_confidence(dataset_factory, slo):
    rng = np.random.default_rng(0)
    X = rng.normal(size=(50, 2))
    data = dataset_factory(X, (X[:, 0] > 0).astype(int), np.zeros(50, dtype=int))
    model = MixedStrategy.point_mass(LinearHypothesis(weights=(0.0, 0.0), bias=2.0))
    fleet = build_fleet([(ModelKind.ERM, model)], {"vendor-a": [0]})
    traces = run_episode(fleet, data, slo)
    assert all(trace.a == 1 for trace in traces)
    assert all(trace.violation_kind is not ViolationKind.LowConfidence for trace in traces)
