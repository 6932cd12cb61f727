"""합성 벤치마크 위의 성질 테스트 (감독 사다리, mining 진행, stride, 잡음, ε, pseudo-point).

전체 파이프라인을 여러 번 돌리므로 slow 로 표시합니다: `pytest -m slow`.
"""

import numpy as np
import pytest

from app.models.enums import Prior, PseudoKind
from app.pipeline.perturb import filter_low_quality, perturb_points, subsample_points
from app.pipeline.runner import run_once, train_models
from app.pipeline.synth import synth_videos
from app.schemas.config import MiningConfig, SynthConfig
from app.services.geometry.overlap import tube_iou
from app.services.mining import run_mining
from app.services.pseudo import PseudoContext, pseudo_track_for, rescore_select, weight_on_videos
from app.utils.random import derive_seed

pytestmark = pytest.mark.slow

SEED = 7
TAUS = [0.2, 0.5]


def benchmark(**overrides):
    config = SynthConfig(
        seed=SEED,
        train_per_action=12,
        test_per_action=12,
        frames_per_video=30,
        width=160,
        height=120,
        proposals_per_video=48,
        **overrides,
    )
    actions, videos = synth_videos(config)
    train = [v for v in videos if v.points is not None]
    test = [v for v in videos if v.points is None]
    return actions, train, test


@pytest.fixture(scope="module")
def bench():
    return benchmark()


@pytest.fixture(scope="module")
def mining():
    return MiningConfig(seed=SEED)


def maps(actions, train, test, mining, prior=Prior.POINT, **kwargs):
    return run_once(actions, train, test, prior=prior, mining=mining, taus=TAUS, **kwargs)


@pytest.fixture(scope="module")
def default_bench():
    actions, videos = synth_videos(SynthConfig(seed=SEED))
    train = [v for v in videos if v.points is not None]
    test = [v for v in videos if v.points is None]
    return actions, train, test


def test_supervision_ladder(default_bench, mining):
    actions, train, test = default_bench
    point = maps(actions, train, test, mining)[0.5]
    best = maps(actions, train, test, mining, Prior.BEST_PROPOSAL)[0.5]
    video = maps(actions, train, test, mining, Prior.VIDEO_LABEL)[0.5]
    box = maps(actions, train, test, mining, Prior.BOX)[0.5]
    assert point >= 0.9 * best
    assert point - video >= 0.10
    assert abs(box - best) <= 0.05


def test_mining_does_not_regress(default_bench, mining):
    actions, train, _ = default_bench
    for action in actions:
        result = run_mining(action, train, mining)
        positives = [(v, v.gt_tubes(action)[0]) for v in train if v.has_label(action)]
        curve = [
            float(np.mean([tube_iou(v.proposals[m[v.video_id]], gt) for v, gt in positives]))
            for m in result.history
        ]
        assert len(curve) == mining.iterations
        for before, after in zip(curve, curve[1:]):
            assert after >= before - 0.02, (action, curve)
        assert curve[-1] >= curve[0], (action, curve)


def test_point_prior_mines_better_proposals(bench, mining):
    actions, train, _ = bench

    def mined_iou(weight):
        config = mining.model_copy(update={"prior_weight": weight})
        ious = []
        for action in actions:
            result = run_mining(action, train, config)
            for video in train:
                if video.has_label(action):
                    gt = video.gt_tubes(action)[0]
                    ious.append(tube_iou(video.proposals[result.mined[video.video_id]], gt))
        return float(np.mean(ious))

    assert mined_iou(1.0) > mined_iou(0.0)


def test_stride_is_flat(bench, mining):
    actions, train, test = bench
    dense = maps(actions, train, test, mining)[0.2]
    sparse_train = [v.with_points(subsample_points(v.points, 20)) for v in train]
    sparse = maps(actions, sparse_train, test, mining)[0.2]
    assert abs(dense - sparse) <= 0.05


def test_small_point_noise_is_tolerated(bench, mining):
    actions, train, test = bench
    clean = maps(actions, train, test, mining)[0.2]
    for sigma in (1.0, 5.0):
        noisy = [
            v.with_points(perturb_points(v.points, sigma, derive_seed(SEED, "sigma", v.video_id), v.meta))
            for v in train
        ]
        assert abs(maps(actions, noisy, test, mining)[0.2] - clean) <= 0.05


def test_removing_low_quality_proposals_helps():
    actions, train, test = benchmark(include_oracle=True)
    mining = MiningConfig(seed=SEED)
    seed = derive_seed(SEED, "epsilon")
    results = []
    for epsilon in (0.0, 0.5, 0.9, 1.0):
        kept_train = [filter_low_quality(v, epsilon, seed) for v in train]
        kept_test = [filter_low_quality(v, epsilon, seed) for v in test]
        results.append(maps(actions, kept_train, kept_test, mining)[0.5])
    for before, after in zip(results, results[1:]):
        assert after >= before - 0.02
    assert results[-1] >= 0.9


def test_person_pseudo_points_beat_center_off_center(mining):
    actions, train, test = benchmark(off_center=True, person_noise=3.0, feature_noise_shared=0.0)
    context = PseudoContext()
    person = weight_on_videos(PseudoKind.PERSON, train, context)
    center = weight_on_videos(PseudoKind.CENTER, train, context)
    assert person.lambda_p > center.lambda_p

    models = train_models(actions, train, Prior.POINT, mining)
    plain, rescored = [], []
    for video in test:
        action = video.labels[0]
        model = models[action]
        gt = video.gt_tubes(action)[0]
        track = pseudo_track_for(PseudoKind.PERSON, video)
        plain.append(tube_iou(video.proposals[int(np.argmax(model.decision(video.features)))], gt))
        rescored.append(tube_iou(video.proposals[rescore_select(model, video, track, person.lambda_p)], gt))
    assert np.mean(rescored) - np.mean(plain) >= 0.02
