"""학습 비디오의 수동 포인트로 pseudo-point 품질 λ_P 를 추정하고 종류를 선택합니다.

어노테이션 프레임마다
  - 사람 박스: center match 항 (박스 중심과 수동 포인트)
  - 포인트 종류: max(0, 1 − ‖manual − pseudo‖ / manual 의 가장 가까운 프레임 경계까지 거리)
를 구해 비디오 안에서 평균하고, 다시 전체 학습 비디오에 대해 평균합니다 (액션 구분 없음).
"""

from __future__ import annotations

import logging
from collections.abc import Sequence

import numpy as np
from numpy.typing import NDArray

from app.core.exceptions import EmptyInputError
from app.models.enums import PSEUDO_KIND_ORDER, PseudoKind
from app.models.geometry import PointTrack, VideoMeta
from app.models.video import Video
from app.services.geometry.overlap import center_match_terms
from app.services.pseudo.base import PseudoContext, PseudoTrack, PseudoWeight
from app.services.pseudo.registry import pseudo_track_for

logger = logging.getLogger(__name__)


def border_distance(xy: NDArray[np.float64], meta: VideoMeta) -> NDArray[np.float64]:
    """(K, 2) 포인트에서 가장 가까운 프레임 경계까지 거리."""
    xy = np.asarray(xy, dtype=np.float64).reshape(-1, 2)
    return np.minimum.reduce(
        [xy[:, 0], xy[:, 1], meta.width - xy[:, 0], meta.height - xy[:, 1]]
    )


def point_terms(
    manual: NDArray[np.float64], pseudo: NDArray[np.float64], meta: VideoMeta
) -> NDArray[np.float64]:
    """프레임별 max(0, 1 − d / border). 경계 위의 수동 포인트는 일치할 때만 1."""
    manual = np.asarray(manual, dtype=np.float64).reshape(-1, 2)
    pseudo = np.asarray(pseudo, dtype=np.float64).reshape(-1, 2)
    dist = np.hypot(manual[:, 0] - pseudo[:, 0], manual[:, 1] - pseudo[:, 1])
    border = border_distance(manual, meta)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(border > 0, 1.0 - dist / border, np.where(dist == 0, 1.0, 0.0))
    return np.clip(terms, 0.0, 1.0)


def video_quality(track: PseudoTrack, manual: PointTrack, meta: VideoMeta) -> float:
    """한 비디오의 어노테이션 프레임 평균 품질."""
    rows = manual.frames - 1
    if track.kind.outputs_box:
        terms = center_match_terms(track.payload[rows], manual.xy)
    else:
        terms = point_terms(manual.xy, track.payload[rows], meta)
    return float(np.mean(terms))


def weight_pseudo(
    kind: PseudoKind,
    tracks: Sequence[PseudoTrack],
    manual: Sequence[PointTrack],
    metas: Sequence[VideoMeta],
) -> PseudoWeight:
    """학습 비디오별 pseudo-track 과 수동 포인트로 λ_P 를 계산합니다.

    Raises:
        EmptyInputError: 포인트가 있는 학습 비디오가 없을 때
    """
    if not (len(tracks) == len(manual) == len(metas)):
        raise ValueError("pseudo-track, 수동 포인트, 메타 개수가 다릅니다")
    scores = [
        video_quality(track, points, meta)
        for track, points, meta in zip(tracks, manual, metas, strict=True)
        if len(points)
    ]
    if not scores:
        raise EmptyInputError(f"{kind.value}: 가중치를 추정할 학습 비디오가 없습니다")
    return PseudoWeight(kind=kind, lambda_p=float(np.clip(np.mean(scores), 0.0, 1.0)))


def weight_on_videos(
    kind: PseudoKind, videos: Sequence[Video], context: PseudoContext
) -> PseudoWeight:
    """학습 비디오에서 pseudo-track 을 생성해 λ_P 를 추정합니다.

    train_stats 는 비디오의 첫 라벨 액션 통계를 씁니다.
    """
    annotated = [v for v in sorted(videos, key=lambda v: v.video_id) if v.points is not None and len(v.points)]
    tracks = [
        pseudo_track_for(
            kind,
            v,
            PseudoContext(action=sorted(v.labels)[0], train_means=context.train_means),
        )
        for v in annotated
    ]
    weight = weight_pseudo(
        kind,
        tracks,
        [v.points for v in annotated if v.points is not None],
        [v.meta for v in annotated],
    )
    logger.info("λ_P(%s) = %.4f", kind.value, weight.lambda_p)
    return weight


def select_pseudo(weights: Sequence[PseudoWeight]) -> PseudoWeight:
    """λ_P 가 가장 큰 종류. 동점이면 고정 우선순위를 따릅니다."""
    if not weights:
        raise EmptyInputError("선택할 pseudo-point 가중치가 없습니다")
    rank = {kind: i for i, kind in enumerate(PSEUDO_KIND_ORDER)}
    return min(weights, key=lambda w: (-w.lambda_p, rank[w.kind]))
