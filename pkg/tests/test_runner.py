"""학습 → 추론 → 평가 실행기와 sweep 프로세서 테스트."""

import numpy as np
import pandas as pd
import pytest

from app.core.exceptions import ConfigError, DatasetError, DimensionMismatchError, EmptyInputError
from app.models.detection import Detection
from app.models.enums import Prior, PseudoKind
from app.pipeline.loader import ground_truth_of
from app.pipeline.processors.base import SweepContext, map_column
from app.pipeline.processors.stride import annotation_speedup
from app.pipeline.registry import Registry, auto_discover
from app.pipeline.runner import (
    evaluate,
    infer,
    load_detections,
    load_models,
    parse_pseudo,
    plan_inference,
    run_once,
    save_detections,
    save_models,
    train_models,
)
from app.pipeline.synth import synth_videos
from app.schemas.config import RunConfig
from tests.conftest import still_tube


@pytest.fixture
def tiny(tiny_synth):
    actions, videos = synth_videos(tiny_synth)
    train = [v for v in videos if v.points is not None]
    test = [v for v in videos if v.points is None]
    return actions, train, test


@pytest.fixture
def trained(tiny, fast_mining):
    actions, train, _ = tiny
    return train_models(actions, train, Prior.POINT, fast_mining)


# ── pseudo 인자 ──


def test_parse_pseudo():
    assert parse_pseudo(["none"]) == []
    assert parse_pseudo(["auto"]) is None
    assert parse_pseudo(["self", "center", "self"]) == [PseudoKind.SELF_SUPERVISION, PseudoKind.CENTER]
    assert parse_pseudo(["none", "Person"]) == [PseudoKind.PERSON]
    with pytest.raises(ConfigError):
        parse_pseudo(["auto", "self"])
    with pytest.raises(ConfigError):
        parse_pseudo(["bogus"])


def test_plan_inference(tiny):
    actions, train, _ = tiny
    plain = plan_inference(actions, train)
    assert plain.weights == () and plain.temporal is None
    assert plain.label == "none"

    plan = plan_inference(actions, train, ["center"], lambda_t=0.5)
    assert [w.kind for w in plan.weights] == [PseudoKind.CENTER]
    assert set(plan.temporal) == set(actions)
    assert all(t.lambda_t == 0.5 for t in plan.temporal.values())
    assert plan.label == "center+temporal"

    auto = plan_inference(actions, train, ["auto"])
    assert len(auto.weights) == 1


# ── 모델 ──


def test_models_round_trip(tmp_path, tiny, trained):
    actions, _, _ = tiny
    save_models(tmp_path, trained)
    assert load_models(tmp_path, actions, 8) == trained
    assert load_models(tmp_path / "models", actions, 8) == trained
    with pytest.raises(DimensionMismatchError):
        load_models(tmp_path, actions, 9)
    with pytest.raises(DatasetError):
        load_models(tmp_path, ["missing"], 8)


def test_train_requires_videos(fast_mining):
    with pytest.raises(EmptyInputError):
        train_models(["a"], [], Prior.POINT, fast_mining)


# ── 추론 ──


def test_infer_emits_one_detection_per_video_and_action(tiny, trained):
    actions, _, test = tiny
    detections = infer(actions, test, trained)
    assert len(detections) == len(actions) * len(test)
    for det in detections:
        video = next(v for v in test if v.video_id == det.video_id)
        scores = trained[det.action].decision(video.features)
        assert det.proposal_index == int(np.argmax(scores))
        assert det.score == pytest.approx(scores.max())
        assert det.tube == video.proposals[det.proposal_index]


def test_infer_with_pseudo_points_keeps_shape(tiny, trained):
    actions, train, test = tiny
    plan = plan_inference(actions, train, ["self", "train_stats"], lambda_t=1.0)
    detections = infer(actions, test, trained, plan)
    assert len(detections) == len(actions) * len(test)
    assert infer(actions, test, trained, plan)[0].score == detections[0].score


def test_detections_round_trip(tmp_path, tiny, trained):
    actions, _, test = tiny
    detections = infer(actions, test, trained)
    csv_path, _ = save_detections(tmp_path, detections)
    table = pd.read_csv(csv_path)
    assert list(table.columns) == [
        "schema_version", "video_id", "action", "score", "start_frame", "end_frame", "proposal_index",
    ]
    loaded = load_detections(tmp_path)
    assert [(d.video_id, d.action, d.proposal_index) for d in loaded] == [
        (d.video_id, d.action, d.proposal_index) for d in detections
    ]
    assert all(a.tube == b.tube for a, b in zip(loaded, detections, strict=True))


# ── 평가 ──


def test_evaluate_returns_tables(tiny, trained):
    actions, _, test = tiny
    detections = infer(actions, test, trained)
    table, summary = evaluate(detections, ground_truth_of(test), [0.2, 0.5], actions)
    assert len(table) == len(actions) * 2
    assert summary["tau"].tolist() == [0.2, 0.5]
    assert summary["map"].between(0.0, 1.0).all()
    # 같은 τ 의 액션 평균
    assert summary["map"].iloc[0] == pytest.approx(table[table["tau"] == 0.2]["ap"].mean())


def test_evaluate_rejects_empty_and_unknown(tiny):
    _, _, test = tiny
    gt = ground_truth_of(test)
    with pytest.raises(EmptyInputError, match="빈 검출"):
        evaluate([], gt, [0.5])
    stray = Detection(video_id="nope", action="action1", score=1.0, tube=still_tube(1, 2, [0, 0, 5, 5]))
    with pytest.raises(DatasetError):
        evaluate([stray], gt, [0.5])


def test_run_once_is_deterministic(tiny, fast_mining):
    actions, train, test = tiny
    first = run_once(actions, train, test, prior=Prior.POINT, mining=fast_mining, taus=[0.2, 0.5])
    second = run_once(actions, train, test, prior=Prior.POINT, mining=fast_mining, taus=[0.2, 0.5])
    assert first == second
    assert set(first) == {0.2, 0.5}


# ── sweep ──


def test_annotation_speedup():
    assert annotation_speedup(1, 60) == pytest.approx(905 / 95)
    assert annotation_speedup(20, 60) == pytest.approx(905 / 9.5)
    assert annotation_speedup(1, 10, label_seconds=0, box_seconds=1, point_seconds=1) == 1.0
    with pytest.raises(ValueError):
        annotation_speedup(0, 10)


def test_registry_discovers_all_sweeps():
    auto_discover()
    assert {"stride", "sigma", "epsilon", "prior", "pseudo"} <= set(Registry.names())
    assert Registry.list_all()[0][0] == Registry.names()[0]
    with pytest.raises(ConfigError, match="nope"):
        Registry.get("nope")


def test_stride_sweep_rows(tmp_path, tiny, fast_mining):
    actions, train, test = tiny
    auto_discover()
    config = RunConfig(subcommand="sweep", out=tmp_path, mining=fast_mining, stride_grid=[1, 4], tau_grid=[0.2])
    context = SweepContext(actions=actions, videos=tuple(train + test), config=config)
    result = Registry.get("stride").run(context)
    table = result.table
    assert list(table.columns) == ["schema_version", "stride", "points", "speedup", map_column(0.2)]
    assert table["stride"].tolist() == [1, 4]
    assert table["points"].iloc[0] > table["points"].iloc[1]
    assert result.path == tmp_path / "sweep_stride.csv"
    assert result.path.exists()


def test_sweeps_pass_pseudo_and_lambda_t_through(monkeypatch, tiny, fast_mining):
    import app.pipeline.processors.base as base

    seen = []

    def fake_run_once(actions, train, test, **kwargs):
        seen.append(kwargs)
        return {t: 0.0 for t in kwargs["taus"]}

    monkeypatch.setattr(base, "run_once", fake_run_once)
    actions, train, test = tiny
    auto_discover()
    config = RunConfig(
        subcommand="sweep",
        mining=fast_mining,
        pseudo=["self", "center"],
        lambda_t=0.7,
        sigma_grid=[0.0, 2.0],
        tau_grid=[0.2],
    )
    context = SweepContext(actions=actions, videos=tuple(train + test), config=config)
    table = Registry.get("sigma").run(context).table
    assert table[map_column(0.2)].tolist() == [0.0, 0.0]
    assert len(seen) == 2
    assert all(k["pseudo"] == ["self", "center"] and k["lambda_t"] == 0.7 for k in seen)
    Registry.get("prior").run(context)
    assert {k["prior"] for k in seen[2:]} == set(Prior)
    assert all(k["pseudo"] == ["self", "center"] and k["lambda_t"] == 0.7 for k in seen[2:])
