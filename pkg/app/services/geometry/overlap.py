"""박스/튜브 겹침과 point-proposal 겹침 측도.

- box_iou / tube_iou: 평가용 IoU. 튜브 IoU 는 두 튜브 중 하나라도 존재하는 프레임 집합 Γ 에 대한
  프레임별 IoU 평균이며, 한쪽만 존재하는 프레임은 0 으로 기여합니다.
- center_match (M): 포인트와 박스 중심의 거리를 중심-변 중점 최대거리로 정규화한 선형 감쇠.
- size_regularizer (S): 튜브 박스 면적 합 / 전체 프레임 면적 합 의 제곱.
- overlap (O): M − S.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
from numpy.typing import NDArray

from app.config import settings
from app.models.geometry import Box2D, PointTrack, Tube, VideoMeta


def boxes_iou(a: NDArray[np.float64], b: NDArray[np.float64]) -> NDArray[np.float64]:
    """(n, 4) 박스 배열 두 개의 원소별 IoU."""
    a = np.asarray(a, dtype=np.float64).reshape(-1, 4)
    b = np.asarray(b, dtype=np.float64).reshape(-1, 4)
    iw = np.maximum(0.0, np.minimum(a[:, 2], b[:, 2]) - np.maximum(a[:, 0], b[:, 0]))
    ih = np.maximum(0.0, np.minimum(a[:, 3], b[:, 3]) - np.maximum(a[:, 1], b[:, 1]))
    inter = iw * ih
    area_a = (a[:, 2] - a[:, 0]) * (a[:, 3] - a[:, 1])
    area_b = (b[:, 2] - b[:, 0]) * (b[:, 3] - b[:, 1])
    return inter / (area_a + area_b - inter)


def box_iou(a: Box2D, b: Box2D) -> float:
    """프레임 내 박스 IoU."""
    return float(boxes_iou(np.array([a.as_list()]), np.array([b.as_list()]))[0])


def tube_iou(a: Tube, b: Tube) -> float:
    """시공간 튜브 IoU: Γ (합집합 시간 범위) 에 대한 프레임별 IoU 평균."""
    union_start = min(a.start_frame, b.start_frame)
    union_end = max(a.end_frame, b.end_frame)
    inter_start = max(a.start_frame, b.start_frame)
    inter_end = min(a.end_frame, b.end_frame)
    if inter_end < inter_start:
        return 0.0

    sa = slice(inter_start - a.start_frame, inter_end - a.start_frame + 1)
    sb = slice(inter_start - b.start_frame, inter_end - b.start_frame + 1)
    total = float(np.sum(boxes_iou(a.boxes[sa], b.boxes[sb])))
    return total / (union_end - union_start + 1)


def tube_ious(tubes: Sequence[Tube], reference: Tube) -> NDArray[np.float64]:
    """여러 튜브와 기준 튜브의 IoU 벡터."""
    return np.array([tube_iou(t, reference) for t in tubes], dtype=np.float64)


def max_tube_ious(tubes: Sequence[Tube], references: Sequence[Tube]) -> NDArray[np.float64]:
    """각 튜브의 기준 튜브 집합에 대한 최대 IoU (기준이 없으면 0)."""
    if not references:
        return np.zeros(len(tubes), dtype=np.float64)
    return np.max(np.stack([tube_ious(tubes, ref) for ref in references]), axis=0)


def center_match_terms(
    boxes: NDArray[np.float64],
    xy: NDArray[np.float64],
    *,
    containment: bool | None = None,
) -> NDArray[np.float64]:
    """프레임별 M 항: max(0, 1 − ‖p − c‖ / max_e ‖e − c‖).

    boxes (n, 4) 와 xy (n, 2) 는 같은 프레임끼리 정렬되어 있어야 합니다.
    변 중점까지의 최대거리는 max(w, h) / 2 입니다.
    """
    if containment is None:
        containment = settings.center_match_containment
    boxes = np.asarray(boxes, dtype=np.float64).reshape(-1, 4)
    xy = np.asarray(xy, dtype=np.float64).reshape(-1, 2)

    cx = (boxes[:, 0] + boxes[:, 2]) / 2.0
    cy = (boxes[:, 1] + boxes[:, 3]) / 2.0
    reach = np.maximum(boxes[:, 2] - boxes[:, 0], boxes[:, 3] - boxes[:, 1]) / 2.0
    dist = np.hypot(xy[:, 0] - cx, xy[:, 1] - cy)
    terms = np.maximum(0.0, 1.0 - dist / reach)

    if containment:
        inside = (
            (xy[:, 0] >= boxes[:, 0])
            & (xy[:, 0] <= boxes[:, 2])
            & (xy[:, 1] >= boxes[:, 1])
            & (xy[:, 1] <= boxes[:, 3])
        )
        terms = np.where(inside, terms, 0.0)
    return terms


def center_match(tube: Tube, points: PointTrack, *, containment: bool | None = None) -> float:
    """M(A, C): 어노테이션 프레임 K 개에 대한 평균.

    튜브 시간 범위 밖의 어노테이션 프레임은 0 으로 기여하고, 분모는 항상 K 입니다.
    """
    if len(points) == 0:
        raise ValueError("포인트 어노테이션이 비어 있습니다")

    covered = (points.frames >= tube.start_frame) & (points.frames <= tube.end_frame)
    if not np.any(covered):
        return 0.0
    rows = points.frames[covered] - tube.start_frame
    terms = center_match_terms(tube.boxes[rows], points.xy[covered], containment=containment)
    return float(np.sum(terms)) / len(points)


def size_regularizer(tube: Tube, video: VideoMeta) -> float:
    """S(A, V) = (Σ|BB_i| / Σ|F_i|)², 분모는 비디오 전체 F_V 프레임."""
    ratio = float(np.sum(tube.areas)) / (video.frame_count * video.frame_area)
    return ratio * ratio


def overlap(
    tube: Tube,
    points: PointTrack,
    video: VideoMeta,
    *,
    containment: bool | None = None,
) -> float:
    """O(A, C, V) = M(A, C) − S(A, V)."""
    return center_match(tube, points, containment=containment) - size_regularizer(tube, video)


def overlaps(
    tubes: Sequence[Tube],
    points: PointTrack,
    video: VideoMeta,
    *,
    containment: bool | None = None,
) -> NDArray[np.float64]:
    """proposal 집합 전체의 O 벡터."""
    return np.array(
        [overlap(t, points, video, containment=containment) for t in tubes], dtype=np.float64
    )
