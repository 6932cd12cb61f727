"""사람 검출 pseudo-box.

프레임마다 신뢰도가 가장 높은 검출 박스를 씁니다 (동점이면 먼저 나온 레코드).
검출이 없는 프레임은 직전 박스를 이어 쓰고, 그것도 없으면 프레임 중심 단위 박스로 채웁니다.
자기 검출이 없는 프레임은 모두 degenerate 로 표시합니다.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence

import numpy as np
from numpy.typing import NDArray

from app.core.exceptions import DatasetError
from app.models.enums import PseudoKind
from app.models.geometry import Box2D, VideoMeta
from app.models.video import DetectionBox, Video
from app.services.pseudo.base import PseudoContext, PseudoTrack

logger = logging.getLogger(__name__)


def _clamped(box: Box2D, meta: VideoMeta) -> NDArray[np.float64] | None:
    xmin, xmax = np.clip([box.xmin, box.xmax], 0.0, float(meta.width))
    ymin, ymax = np.clip([box.ymin, box.ymax], 0.0, float(meta.height))
    if xmin >= xmax or ymin >= ymax:
        return None
    return np.array([xmin, ymin, xmax, ymax], dtype=np.float64)


def top_detections(
    detections: Sequence[DetectionBox], meta: VideoMeta
) -> dict[int, NDArray[np.float64]]:
    """프레임별 최대 신뢰도 박스 (프레임 안으로 클램프)."""
    best: dict[int, tuple[float, NDArray[np.float64]]] = {}
    for record in detections:
        if not 1 <= record.frame <= meta.frame_count:
            raise DatasetError(
                f"검출 프레임 {record.frame} 이 비디오 범위 [1, {meta.frame_count}] 밖입니다"
            )
        box = _clamped(record.box, meta)
        if box is None:
            continue
        current = best.get(record.frame)
        if current is None or record.confidence > current[0]:
            best[record.frame] = (record.confidence, box)
    return {frame: box for frame, (_, box) in best.items()}


def pp_person(
    detections: Sequence[DetectionBox], meta: VideoMeta
) -> tuple[NDArray[np.float64], frozenset[int]]:
    """(F_V, 4) 프레임별 박스와 자기 검출이 없던 프레임 집합."""
    top = top_detections(detections, meta)
    cx, cy = meta.center
    fallback = np.array([cx - 0.5, cy - 0.5, cx + 0.5, cy + 0.5], dtype=np.float64)

    boxes = np.empty((meta.frame_count, 4), dtype=np.float64)
    flagged: list[int] = []
    carried: NDArray[np.float64] | None = None
    for frame in range(1, meta.frame_count + 1):
        if frame in top:
            carried = top[frame]
        else:
            flagged.append(frame)
        boxes[frame - 1] = fallback if carried is None else carried
    return boxes, frozenset(flagged)


def generate(video: Video, context: PseudoContext) -> PseudoTrack:
    boxes, flagged = pp_person(video.detections, video.meta)
    if len(flagged) == video.meta.frame_count:
        logger.warning("%s: 사람 검출이 없어 프레임 중심 박스를 사용합니다", video.video_id)
    return PseudoTrack(kind=PseudoKind.PERSON, payload=boxes, degenerate=flagged)
