"""학습 point 통계 pseudo-point.

액션별 학습 비디오의 평균 포인트를 상대 좌표 (x / F_W, y / F_H) 로 구해 평균하고,
테스트 비디오의 모든 프레임에 같은 위치로 배치합니다.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from app.core.exceptions import DatasetError, EmptyInputError
from app.models.enums import PseudoKind
from app.models.geometry import PointTrack, VideoMeta
from app.models.video import Video
from app.services.pseudo.base import PseudoContext, PseudoTrack


def relative_mean(points: PointTrack, meta: VideoMeta) -> tuple[float, float]:
    """한 비디오의 평균 포인트 (상대 좌표)."""
    mean = points.xy.mean(axis=0)
    return (float(mean[0]) / meta.width, float(mean[1]) / meta.height)


def pp_train_stats(
    action: str,
    tracks: Sequence[tuple[PointTrack, VideoMeta]],
) -> tuple[float, float]:
    """액션 학습 비디오들의 (포인트 트랙, 메타) 로 평균 상대 위치를 계산합니다."""
    means = [relative_mean(points, meta) for points, meta in tracks if len(points)]
    if not means:
        raise EmptyInputError(f"{action}: 학습 포인트가 있는 비디오가 없습니다")
    rx, ry = np.mean(np.asarray(means, dtype=np.float64), axis=0)
    return (float(rx), float(ry))


def train_means(videos: Sequence[Video], actions: Sequence[str]) -> dict[str, tuple[float, float]]:
    """학습 비디오에서 액션별 평균 상대 위치를 모읍니다 (포인트가 없는 액션은 제외)."""
    out: dict[str, tuple[float, float]] = {}
    for action in actions:
        tracks = [
            (v.points, v.meta)
            for v in sorted(videos, key=lambda v: v.video_id)
            if v.has_label(action) and v.points is not None and len(v.points)
        ]
        if tracks:
            out[action] = pp_train_stats(action, tracks)
    return out


def generate(video: Video, context: PseudoContext) -> PseudoTrack:
    if context.action is None:
        raise DatasetError("train_stats pseudo-point 에는 액션이 필요합니다")
    if context.action not in context.train_means:
        raise EmptyInputError(f"{context.action}: 학습 포인트 통계가 없습니다")
    rx, ry = context.train_means[context.action]
    xy = video.meta.clamp_xy(np.array([rx * video.meta.width, ry * video.meta.height]))
    return PseudoTrack(
        kind=PseudoKind.TRAIN_STATS,
        payload=np.tile(xy, (video.meta.frame_count, 1)),
    )
