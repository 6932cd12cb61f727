"""추론 시 pseudo-point 재점수화와 시간 길이 prior.

공간: score(z) + Σ_P λ_P · O(A_z, P, V)   (사람 박스는 중심 포인트로 축약, O 는 S 항 포함)
시간: score(z) − λ_T · |F_Y − F_t| / F_Y  (F_t 는 proposal 길이 / 테스트 비디오 길이)

두 보정은 순서대로 더해지며 각각 생략할 수 있습니다. 선택은 최대값, 동점이면 낮은 인덱스입니다.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from app.config import settings
from app.core.exceptions import EmptyInputError
from app.models.linear import LinearModel
from app.models.video import Video
from app.services.geometry.overlap import overlaps
from app.services.pseudo.base import PseudoTrack


@dataclass(frozen=True)
class TemporalStats:
    """액션별 평균 어노테이션 길이 비율 F_Y 와 가중치 λ_T."""

    action: str
    mean_extent: float
    lambda_t: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 < self.mean_extent <= 1.0:
            raise ValueError(f"F_Y 는 (0, 1] 범위여야 합니다: {self.mean_extent}")
        if self.lambda_t < 0:
            raise ValueError(f"λ_T 는 0 이상이어야 합니다: {self.lambda_t}")


def pseudo_bonus(video: Video, pairs: Sequence[tuple[PseudoTrack, float]]) -> NDArray[np.float64]:
    """proposal 별 Σ λ_P · O(A, P, V)."""
    bonus = np.zeros(len(video.proposals), dtype=np.float64)
    for track, lambda_p in pairs:
        if lambda_p == 0:
            continue
        bonus += lambda_p * overlaps(video.proposals, track.as_point_track(), video.meta)
    return bonus


def rescore_select_many(
    model: LinearModel, video: Video, pairs: Sequence[tuple[PseudoTrack, float]]
) -> int:
    """여러 (pseudo-track, λ_P) 를 합산해 재점수화한 최대 proposal."""
    scores = model.decision(video.features) + pseudo_bonus(video, pairs)
    return int(np.argmax(scores))


def rescore_select(model: LinearModel, video: Video, track: PseudoTrack, lambda_p: float) -> int:
    """argmax_z (w·z + b) + λ_P · O(A_z, P, V)."""
    return rescore_select_many(model, video, [(track, lambda_p)])


def temporal_stats(action: str, videos: Sequence[Video], lambda_t: float | None = None) -> TemporalStats:
    """액션 학습 비디오의 (마지막 − 첫 어노테이션 프레임 + 1) / F_V 평균."""
    spans = [
        (v.points.last_frame - v.points.first_frame + 1) / v.meta.frame_count
        for v in videos
        if v.has_label(action) and v.points is not None and len(v.points)
    ]
    if not spans:
        raise EmptyInputError(f"{action}: 시간 통계를 낼 학습 비디오가 없습니다")
    return TemporalStats(
        action=action,
        mean_extent=float(np.mean(spans)),
        lambda_t=settings.lambda_t if lambda_t is None else lambda_t,
    )


def temporal_penalty(extents: ArrayLike, stats: TemporalStats) -> NDArray[np.float64]:
    extents = np.asarray(extents, dtype=np.float64)
    return stats.lambda_t * np.abs(stats.mean_extent - extents) / stats.mean_extent


def temporal_rescore(scores: ArrayLike, extents: ArrayLike, stats: TemporalStats) -> int:
    """argmax_z score(z) − λ_T · |F_Y − F_t(z)| / F_Y."""
    adjusted = np.asarray(scores, dtype=np.float64)
    if stats.lambda_t != 0:
        adjusted = adjusted - temporal_penalty(extents, stats)
    return int(np.argmax(adjusted))


def adjusted_scores(
    model: LinearModel,
    video: Video,
    pairs: Sequence[tuple[PseudoTrack, float]] = (),
    temporal: TemporalStats | None = None,
) -> NDArray[np.float64]:
    """모델 점수에 공간/시간 보정을 차례로 더한 proposal 점수."""
    scores = model.decision(video.features) + pseudo_bonus(video, pairs)
    if temporal is not None and temporal.lambda_t != 0:
        extents = [t.relative_extent(video.meta) for t in video.proposals]
        scores = scores - temporal_penalty(extents, temporal)
    return scores


def select_top1(
    model: LinearModel,
    video: Video,
    pairs: Sequence[tuple[PseudoTrack, float]] = (),
    temporal: TemporalStats | None = None,
) -> tuple[int, float]:
    """(선택 proposal 인덱스, 보정된 점수)."""
    scores = adjusted_scores(model, video, pairs, temporal)
    index = int(np.argmax(scores))
    return index, float(scores[index])
