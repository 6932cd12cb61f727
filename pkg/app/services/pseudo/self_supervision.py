"""proposal 밀도 중심 pseudo-point.

픽셀 mass 를 그 픽셀을 포함하는 proposal 수로 두면, 박스 경계가 만드는 분할의 각 셀이
포함 횟수만큼 가중된 중심은 프레임으로 잘린 박스 중심들의 면적 가중 평균과 정확히 같습니다.
래스터화 없이 shapely 로 박스를 프레임에 자르고 면적과 중심만 씁니다.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence

import numpy as np
import shapely
from numpy.typing import NDArray

from app.models.enums import PseudoKind
from app.models.geometry import Tube, VideoMeta
from app.models.video import Video
from app.services.pseudo.base import PseudoContext, PseudoTrack

logger = logging.getLogger(__name__)


def coverage_centroid(
    boxes: NDArray[np.float64], meta: VideoMeta
) -> tuple[float, float] | None:
    """(n, 4) 박스들의 포함 횟수 가중 중심. 프레임 안에 면적이 없으면 None."""
    boxes = np.asarray(boxes, dtype=np.float64).reshape(-1, 4)
    if boxes.shape[0] == 0:
        return None
    rects = shapely.box(boxes[:, 0], boxes[:, 1], boxes[:, 2], boxes[:, 3])
    clipped = shapely.clip_by_rect(rects, 0.0, 0.0, float(meta.width), float(meta.height))
    areas = shapely.area(clipped)
    total = float(np.sum(areas))
    if total <= 0.0:
        return None
    keep = areas > 0
    centroids = shapely.centroid(clipped[keep])
    x = float(np.sum(areas[keep] * shapely.get_x(centroids))) / total
    y = float(np.sum(areas[keep] * shapely.get_y(centroids))) / total
    return (x, y)


def pp_self_supervision(
    proposals: Sequence[Tube], frame: int, meta: VideoMeta
) -> tuple[float, float] | None:
    """frame 을 덮는 proposal 들의 mass 중심. 덮는 proposal 이 없으면 None."""
    rows = [t.boxes[frame - t.start_frame] for t in proposals if t.covers(frame)]
    if not rows:
        return None
    return coverage_centroid(np.stack(rows), meta)


def generate(video: Video, context: PseudoContext) -> PseudoTrack:
    meta = video.meta
    payload = np.empty((meta.frame_count, 2), dtype=np.float64)
    degenerate: list[int] = []
    for frame in range(1, meta.frame_count + 1):
        point = pp_self_supervision(video.proposals, frame, meta)
        if point is None:
            degenerate.append(frame)
            point = meta.center
        payload[frame - 1] = point
    if degenerate:
        logger.debug("%s: proposal 이 없는 프레임 %d 개를 중심으로 대체", video.video_id, len(degenerate))
    return PseudoTrack(
        kind=PseudoKind.SELF_SUPERVISION,
        payload=meta.clamp_xy(payload),
        degenerate=frozenset(degenerate),
    )
