"""point prior 를 포함한 MIL proposal mining.

mining score  P(z) = (w·z + b) + prior_weight · O(A_z, C, V)

학습은 block coordinate descent 로 진행합니다.
  - 0 라운드: zero 모델로 mining (point prior 만으로 선택)
  - r ≥ 1 라운드: 양성 비디오를 fold 로 나누고, fold k 는 나머지 fold 의 mined proposal 로
    학습한 모델로 다시 mining (re-localization)
  - 마지막 라운드의 mined proposal 과 같은 음성 샘플로 최종 모델을 학습

난수 사용 순서 (stream(seed, "mil", action) 하나):
  1) 음성 비디오를 id 순으로 돌며 비디오마다 proposal 비복원 추출
  2) 라운드 1 부터 매 라운드 양성 비디오 순열 1회
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from app.core.exceptions import DatasetError, EmptyInputError
from app.models.geometry import PointTrack, Tube, VideoMeta
from app.models.linear import LinearModel
from app.models.video import Video
from app.schemas.config import MiningConfig
from app.services.geometry.overlap import overlap, overlaps
from app.services.mining.svm import train_linear_svm
from app.utils.random import derive_seed, stream

logger = logging.getLogger(__name__)


@dataclass
class MiningResult:
    """mining 결과: 최종 모델과 라운드별 선택 proposal."""

    action: str
    model: LinearModel
    mined: dict[str, int]
    history: list[dict[str, int]] = field(default_factory=list)


def mining_score(
    model: LinearModel,
    feature: NDArray[np.float64],
    tube: Tube,
    points: PointTrack,
    video: VideoMeta,
    prior_weight: float,
) -> float:
    """단일 proposal 의 mining score."""
    raw = float(model.decision(np.asarray(feature, dtype=np.float64).reshape(1, -1))[0])
    if prior_weight == 0:
        return raw
    return raw + prior_weight * overlap(tube, points, video)


def video_priors(video: Video) -> NDArray[np.float64]:
    """비디오 proposal 전체의 point overlap O."""
    if video.points is None or len(video.points) == 0:
        raise DatasetError(f"{video.video_id}: point 어노테이션이 없습니다")
    return overlaps(video.proposals, video.points, video.meta)


def mining_scores(
    model: LinearModel,
    video: Video,
    prior_weight: float,
    priors: NDArray[np.float64] | None = None,
) -> NDArray[np.float64]:
    scores = model.decision(video.features)
    if prior_weight == 0:
        return scores
    if priors is None:
        priors = video_priors(video)
    return scores + prior_weight * priors


def mine_best_proposal(
    model: LinearModel,
    video: Video,
    prior_weight: float,
    priors: NDArray[np.float64] | None = None,
) -> int:
    """mining score 최대 proposal 인덱스 (동점이면 가장 낮은 인덱스)."""
    return int(np.argmax(mining_scores(model, video, prior_weight, priors)))


def split_videos(
    videos: Sequence[Video], action: str
) -> tuple[list[Video], list[Video]]:
    """(action 라벨을 가진 비디오, 그렇지 않은 비디오), 각각 id 순."""
    ordered = sorted(videos, key=lambda v: v.video_id)
    positives = [v for v in ordered if v.has_label(action)]
    others = [v for v in ordered if not v.has_label(action)]
    return positives, others


def sample_negatives(
    others: Sequence[Video],
    per_video: int,
    rng: np.random.Generator,
) -> NDArray[np.float64]:
    """다른 액션 비디오마다 proposal 을 per_video 개 (비복원) 추출한 특징 행렬."""
    rows: list[NDArray[np.float64]] = []
    for video in others:
        n = len(video.proposals)
        picked = rng.choice(n, size=min(per_video, n), replace=False)
        rows.append(video.features[np.sort(picked)])
    return np.concatenate(rows, axis=0)


def check_training_videos(action: str, positives: list[Video], others: list[Video]) -> None:
    if not positives:
        raise EmptyInputError(f"{action}: 양성 학습 비디오가 없습니다")
    if not others:
        raise EmptyInputError(f"{action}: 음성 샘플을 뽑을 다른 액션 비디오가 없습니다")


def run_mining(action: str, videos: Sequence[Video], config: MiningConfig) -> MiningResult:
    """MIL mining 전체를 실행하고 라운드별 선택까지 돌려줍니다."""
    positives, others = split_videos(videos, action)
    check_training_videos(action, positives, others)

    rng = stream(config.seed, "mil", action)
    negatives = sample_negatives(others, config.negatives_per_video, rng)

    use_prior = config.prior_weight != 0
    priors = {v.video_id: video_priors(v) for v in positives} if use_prior else {}

    def mine(model: LinearModel, video: Video) -> int:
        return mine_best_proposal(model, video, config.prior_weight, priors.get(video.video_id))

    def fit(pool: Sequence[Video], mined: dict[str, int], *labels: object) -> LinearModel:
        pos = np.stack([v.features[mined[v.video_id]] for v in pool])
        return train_linear_svm(
            pos,
            negatives,
            config.lambda_reg,
            derive_seed(config.seed, action, *labels),
            epochs=config.epochs,
            batch_size=config.batch_size,
        )

    zero = LinearModel.zeros(positives[0].feature_dim)
    mined = {v.video_id: mine(zero, v) for v in positives}
    history = [dict(mined)]

    for round_no in range(1, config.iterations):
        order = rng.permutation(len(positives))
        n_folds = min(config.folds, len(positives))
        if n_folds < 2:
            model = fit(positives, mined, round_no, "all")
            mined = {v.video_id: mine(model, v) for v in positives}
        else:
            folds = np.array_split(order, n_folds)
            updated = dict(mined)
            for k, fold in enumerate(folds):
                held = {int(i) for i in fold}
                pool = [v for i, v in enumerate(positives) if i not in held]
                model = fit(pool, mined, round_no, k)
                for i in sorted(held):
                    video = positives[i]
                    updated[video.video_id] = mine(model, video)
            mined = updated
        history.append(dict(mined))
        logger.info("%s: mining 라운드 %d/%d 완료", action, round_no + 1, config.iterations)

    final = fit(positives, mined, "final")
    return MiningResult(action=action, model=final, mined=mined, history=history)


def mil_train(action: str, videos: Sequence[Video], config: MiningConfig) -> LinearModel:
    """point prior MIL 로 action 분류기를 학습합니다."""
    return run_mining(action, videos, config).model
