"""선형 SVM 솔버, mining score, MIL 학습, 감독 기준선 테스트."""

import numpy as np
import pytest

from app.core.exceptions import DatasetError, DimensionMismatchError, EmptyInputError
from app.models.enums import Prior
from app.models.linear import LinearModel
from app.services.geometry.overlap import overlap
from app.services.mining import (
    best_proposal_indices,
    hinge_objective,
    mil_train,
    mine_best_proposal,
    mining_score,
    run_mining,
    train_for_prior,
    train_linear_svm,
)
from app.services.mining.baselines import box_supervision_sets
from app.services.mining.mil import sample_negatives, split_videos
from app.utils.random import derive_seed, stream
from tests.conftest import make_video, points, still_tube

FULL = [0, 0, 100, 100]
TIGHT = [20, 20, 40, 40]
AWAY = [60, 60, 90, 90]


def positive_video(i: int, *, with_gt: bool = True):
    """proposal 1 이 포인트 (30, 30) 을 감싸는 양성 비디오."""
    feats = np.array([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0]], dtype=float)
    gt = {"a": (still_tube(1, 10, TIGHT),)} if with_gt else None
    return make_video(
        f"a{i:02d}",
        [still_tube(1, 10, FULL), still_tube(1, 10, TIGHT), still_tube(1, 10, AWAY)],
        feats,
        labels=("a",),
        track=points({f: (30.0, 30.0) for f in range(1, 11)}),
        ground_truth=gt,
    )


def negative_video(i: int):
    feats = np.array([[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], dtype=float)
    return make_video(
        f"b{i:02d}",
        [still_tube(1, 10, FULL), still_tube(1, 10, TIGHT), still_tube(1, 10, AWAY)],
        feats,
        labels=("b",),
        ground_truth={"b": (still_tube(1, 10, AWAY),)},
    )


@pytest.fixture
def toy_videos():
    return [positive_video(i) for i in range(4)] + [negative_video(i) for i in range(3)]


# ── SVM ──


def test_svm_separates_singletons():
    model = train_linear_svm([[1.0, 0.0]], [[-1.0, 0.0]], 10.0, seed=1)
    assert model.decision(np.array([[1.0, 0.0]]))[0] > 0
    assert model.decision(np.array([[-1.0, 0.0]]))[0] < 0


def test_svm_identical_classes_straddle_zero():
    x = [[0.3, 0.4]]
    model = train_linear_svm(x, x, 10.0, seed=1)
    assert abs(model.decision(np.array(x))[0]) < 1e-9
    assert np.isfinite(hinge_objective(model, x, x, 10.0))


def test_svm_random_separable_set_is_fit_exactly():
    rng = stream(21, "test", "svm")
    pos = np.column_stack([rng.uniform(1, 3, 20), rng.uniform(-2, 2, 20)])
    neg = np.column_stack([rng.uniform(-3, -1, 20), rng.uniform(-2, 2, 20)])
    model = train_linear_svm(pos, neg, 10.0, seed=3)
    assert np.all(model.decision(pos) > 0)
    assert np.all(model.decision(neg) < 0)


def test_svm_is_deterministic_and_beats_zero_model():
    rng = stream(22, "test", "svm")
    pos = rng.normal(0.5, 1.0, size=(30, 5))
    neg = rng.normal(-0.5, 1.0, size=(30, 5))
    first = train_linear_svm(pos, neg, 10.0, seed=9)
    second = train_linear_svm(pos, neg, 10.0, seed=9)
    assert first == second
    assert hinge_objective(first, pos, neg, 10.0) <= hinge_objective(LinearModel.zeros(5), pos, neg, 10.0)


def test_svm_rejects_bad_inputs():
    with pytest.raises(EmptyInputError):
        train_linear_svm(np.empty((0, 2)), [[1.0, 0.0]], 10.0, seed=1)
    with pytest.raises(DimensionMismatchError):
        train_linear_svm([[1.0, 0.0]], [[1.0, 0.0, 0.0]], 10.0, seed=1)


# ── mining score ──


def test_mining_score_is_decision_plus_prior():
    video = positive_video(0)
    model = LinearModel(weights=np.array([0.4, 0.0, 0.0, 0.0]), bias=0.0)
    tube, feature = video.proposals[1], video.features[1]
    prior = overlap(tube, video.points, video.meta)

    assert mining_score(model, feature, tube, video.points, video.meta, 0.0) == 0.4
    assert mining_score(model, feature, tube, video.points, video.meta, 1.0) == pytest.approx(0.4 + prior)
    zero = LinearModel.zeros(4)
    assert mining_score(zero, feature, tube, video.points, video.meta, 1.0) == prior


def test_mine_best_proposal_zero_model_uses_prior():
    video = positive_video(0)
    assert mine_best_proposal(LinearModel.zeros(4), video, 1.0) == 1


def test_mine_best_proposal_single_proposal():
    video = make_video("x", [still_tube(1, 3, TIGHT)], np.array([[1.0, 0.0]]), track=points({1: (5.0, 5.0)}))
    assert mine_best_proposal(LinearModel.zeros(2), video, 1.0) == 0


def test_mine_best_proposal_ignores_constant_shift():
    video = positive_video(0)
    model = LinearModel(weights=np.array([0.1, 0.5, -0.2, 0.0]), bias=0.0)
    shifted = LinearModel(weights=model.weights, bias=3.0)
    assert mine_best_proposal(model, video, 1.0) == mine_best_proposal(shifted, video, 1.0)


def planted_video(seed: int):
    """(50, 50) 를 가리키는 포인트, 그 주위의 20x20 박스 하나와 무작위 박스 20 개."""
    rng = np.random.default_rng(seed)
    planted = int(rng.integers(21))
    corners = rng.uniform(0, 70, size=(21, 2))
    sizes = rng.uniform(10, 30, size=(21, 2))
    boxes = np.hstack([corners, corners + sizes])
    boxes[planted] = [40, 40, 60, 60]
    features = rng.normal(size=(21, 8))
    features /= np.linalg.norm(features, axis=1, keepdims=True)
    track = points({f: (50.0, 50.0) for f in range(1, 11)})
    video = make_video("v", [still_tube(1, 10, b) for b in boxes], features, track=track)
    model = LinearModel(weights=rng.normal(0.0, 0.02, size=8), bias=0.0)
    return video, model, planted


def test_mine_best_proposal_finds_planted_box():
    hits = 0
    for seed in range(100):
        video, model, planted = planted_video(seed)
        picked = mine_best_proposal(model, video, 1.0)
        scores = [
            mining_score(model, f, t, video.points, video.meta, 1.0)
            for f, t in zip(video.features, video.proposals, strict=True)
        ]
        assert picked == int(np.argmax(scores))
        hits += picked == planted
    assert hits >= 95


# ── MIL ──


def test_mil_mines_the_point_proposals(toy_videos, fast_mining):
    result = run_mining("a", toy_videos, fast_mining)
    assert set(result.mined.values()) == {1}
    assert len(result.history) == fast_mining.iterations
    assert result.history[0] == {f"a{i:02d}": 1 for i in range(4)}
    assert result.model.decision(np.array([[1.0, 0, 0, 0]]))[0] > 0


def test_mil_is_deterministic(toy_videos, fast_mining):
    assert mil_train("a", toy_videos, fast_mining) == mil_train("a", toy_videos, fast_mining)


def test_mil_single_positive_single_proposal(fast_mining):
    only = make_video(
        "a00", [still_tube(1, 10, TIGHT)], np.array([[1.0, 0, 0, 0]]), track=points({1: (30.0, 30.0)})
    )
    videos = [only, negative_video(0)]
    result = run_mining("a", videos, fast_mining)
    rng = stream(fast_mining.seed, "mil", "a")
    negatives = sample_negatives([videos[1]], fast_mining.negatives_per_video, rng)
    expected = train_linear_svm(
        only.features[[0]],
        negatives,
        fast_mining.lambda_reg,
        derive_seed(fast_mining.seed, "a", "final"),
        epochs=fast_mining.epochs,
        batch_size=fast_mining.batch_size,
    )
    assert result.model == expected


def test_mil_requires_positives_and_negatives(toy_videos, fast_mining):
    with pytest.raises(EmptyInputError):
        mil_train("missing", toy_videos, fast_mining)
    with pytest.raises(EmptyInputError):
        mil_train("a", [v for v in toy_videos if v.has_label("a")], fast_mining)


def test_point_prior_requires_points(fast_mining):
    videos = [positive_video(0).with_points(None), negative_video(0)]
    with pytest.raises(DatasetError):
        mil_train("a", videos, fast_mining)
    # 비디오 라벨만 쓰는 학습은 포인트가 필요 없다
    train_for_prior(Prior.VIDEO_LABEL, "a", videos, fast_mining)


# ── 기준선 ──


def test_best_proposal_picks_max_iou(toy_videos):
    assert set(best_proposal_indices("a", toy_videos).values()) == {1}


def test_best_proposal_tie_goes_to_lowest_index():
    twin = make_video(
        "a00",
        [still_tube(1, 10, AWAY), still_tube(1, 10, TIGHT), still_tube(1, 10, TIGHT)],
        ground_truth={"a": (still_tube(1, 10, TIGHT),)},
    )
    assert best_proposal_indices("a", [twin]) == {"a00": 1}


def test_box_supervision_thresholds(toy_videos, fast_mining):
    sets = box_supervision_sets("a", toy_videos, fast_mining, stream(1, "test"))
    for vid, chosen in sets.positives.items():
        assert chosen == [1]
        assert sets.stand_ins[vid] == 1
        # 전체 프레임 (IoU 0.04) 과 떨어진 박스 (IoU 0) 는 음성
        assert sets.own_negatives[vid] == [0, 2]


@pytest.mark.parametrize("prior", list(Prior))
def test_every_prior_trains_a_model(prior, toy_videos, fast_mining):
    model = train_for_prior(prior, "a", toy_videos, fast_mining)
    assert model.dim == 4
    assert model.decision(np.array([[1.0, 0, 0, 0]]))[0] > model.decision(np.array([[0, 0, 0, 1.0]]))[0]


def test_video_label_prior_is_mil_without_prior(toy_videos, fast_mining):
    expected = mil_train("a", toy_videos, fast_mining.model_copy(update={"prior_weight": 0.0}))
    assert train_for_prior(Prior.VIDEO_LABEL, "a", toy_videos, fast_mining) == expected


def test_multi_label_video_is_positive_for_each_label(toy_videos):
    """여러 라벨을 가진 비디오는 라벨마다 양성 bag 이고 나머지 액션의 음성 출처입니다."""
    both = make_video("ab", [still_tube(1, 10, TIGHT)], np.eye(1, 4), labels=("a", "b"))
    videos = [*toy_videos, both]

    positives_a, others_a = split_videos(videos, "a")
    positives_b, others_b = split_videos(videos, "b")
    assert "ab" in {v.video_id for v in positives_a}
    assert "ab" in {v.video_id for v in positives_b}
    assert "ab" not in {v.video_id for v in others_a + others_b}

    positives_c, others_c = split_videos(videos, "c")
    assert positives_c == []
    assert [v.video_id for v in others_c] == sorted(v.video_id for v in videos)
