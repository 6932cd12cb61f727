"""GT 박스를 쓰는 감독 기준선과 감독 방식별 학습 진입점.

- best-proposal: 양성 비디오마다 GT 와 tube IoU 가 가장 큰 proposal 하나 (동점이면 낮은 인덱스)
- box-supervision: IoU > 0.6 proposal 전부 + GT 특징 대용(최대 IoU proposal) 을 양성으로,
  IoU < 0.1 인 자기 비디오 proposal 과 다른 액션 샘플을 음성으로 사용

다른 액션 음성 샘플은 MIL 과 같은 스트림에서 같은 순서로 뽑으므로 감독 방식 간 비교가 짝을 이룹니다.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from app.core.exceptions import DatasetError
from app.models.enums import Prior
from app.models.linear import LinearModel
from app.models.video import Video
from app.schemas.config import MiningConfig
from app.services.geometry.overlap import max_tube_ious
from app.services.mining.mil import check_training_videos, mil_train, sample_negatives, split_videos
from app.services.mining.svm import train_linear_svm
from app.utils.random import derive_seed, stream

logger = logging.getLogger(__name__)

POSITIVE_IOU = 0.6
NEGATIVE_IOU = 0.1


@dataclass
class BoxSupervision:
    """box-supervision 학습 집합 (비디오별 양성/음성 proposal 인덱스)."""

    positives: dict[str, list[int]]
    stand_ins: dict[str, int]
    own_negatives: dict[str, list[int]]


def _gt_ious(video: Video, action: str) -> NDArray[np.float64]:
    tubes = video.gt_tubes(action)
    if not tubes:
        raise DatasetError(f"{video.video_id}: '{action}' GT 튜브가 없습니다")
    return max_tube_ious(video.proposals, tubes)


def best_proposal_indices(action: str, videos: Sequence[Video]) -> dict[str, int]:
    """양성 비디오별 GT 최대 IoU proposal 인덱스."""
    positives, _ = split_videos(videos, action)
    return {v.video_id: int(np.argmax(_gt_ious(v, action))) for v in positives}


def box_supervision_sets(
    action: str,
    videos: Sequence[Video],
    config: MiningConfig,
    rng: np.random.Generator,
) -> BoxSupervision:
    positives, _ = split_videos(videos, action)
    chosen: dict[str, list[int]] = {}
    stand_ins: dict[str, int] = {}
    own_negatives: dict[str, list[int]] = {}
    for video in positives:
        ious = _gt_ious(video, action)
        stand_ins[video.video_id] = int(np.argmax(ious))
        chosen[video.video_id] = [int(i) for i in np.flatnonzero(ious > POSITIVE_IOU)]

        low = np.flatnonzero(ious < NEGATIVE_IOU)
        if low.size:
            picked = rng.choice(low, size=min(config.negatives_per_video, low.size), replace=False)
            own_negatives[video.video_id] = sorted(int(i) for i in picked)
        else:
            own_negatives[video.video_id] = []

        if not chosen[video.video_id]:
            logger.debug("%s: IoU > %.1f proposal 없음, 최대 IoU proposal 만 사용", video.video_id, POSITIVE_IOU)
    return BoxSupervision(positives=chosen, stand_ins=stand_ins, own_negatives=own_negatives)


def _final_fit(
    action: str,
    positives: NDArray[np.float64],
    negatives: NDArray[np.float64],
    config: MiningConfig,
) -> LinearModel:
    return train_linear_svm(
        positives,
        negatives,
        config.lambda_reg,
        derive_seed(config.seed, action, "final"),
        epochs=config.epochs,
        batch_size=config.batch_size,
    )


def best_proposal_train(action: str, videos: Sequence[Video], config: MiningConfig) -> LinearModel:
    """GT 와 가장 많이 겹치는 proposal 로 학습하는 기준선."""
    positives, others = split_videos(videos, action)
    check_training_videos(action, positives, others)
    rng = stream(config.seed, "mil", action)
    negatives = sample_negatives(others, config.negatives_per_video, rng)

    best = best_proposal_indices(action, positives)
    pos = np.stack([v.features[best[v.video_id]] for v in positives])
    return _final_fit(action, pos, negatives, config)


def box_supervised_train(action: str, videos: Sequence[Video], config: MiningConfig) -> LinearModel:
    """GT 박스 감독 기준선."""
    positives, others = split_videos(videos, action)
    check_training_videos(action, positives, others)
    rng = stream(config.seed, "mil", action)
    other_negatives = sample_negatives(others, config.negatives_per_video, rng)

    sets = box_supervision_sets(action, positives, config, rng)
    pos_rows: list[NDArray[np.float64]] = []
    neg_rows: list[NDArray[np.float64]] = [other_negatives]
    for video in positives:
        vid = video.video_id
        pos_rows.append(video.features[[sets.stand_ins[vid], *sets.positives[vid]]])
        if sets.own_negatives[vid]:
            neg_rows.append(video.features[sets.own_negatives[vid]])

    pos = np.concatenate(pos_rows, axis=0)
    neg = np.concatenate(neg_rows, axis=0)
    logger.info("%s: box-supervision 양성 %d, 음성 %d", action, pos.shape[0], neg.shape[0])
    return _final_fit(action, pos, neg, config)


def train_for_prior(
    prior: Prior,
    action: str,
    videos: Sequence[Video],
    config: MiningConfig,
) -> LinearModel:
    """감독 방식에 맞는 학습 함수를 호출합니다."""
    match prior:
        case Prior.POINT:
            return mil_train(action, videos, config)
        case Prior.VIDEO_LABEL:
            return mil_train(action, videos, config.model_copy(update={"prior_weight": 0.0}))
        case Prior.BOX:
            return box_supervised_train(action, videos, config)
        case Prior.BEST_PROPOSAL:
            return best_proposal_train(action, videos, config)
