"""독립 모션 중심 pseudo-point.

mass map 격자의 가중 중심을 격자 좌표로 구한 뒤 셀 중심 기준으로 픽셀 좌표에 올립니다:
x = (x̄ + 0.5) · downsample.
"""

from __future__ import annotations

import logging

import numpy as np
from numpy.typing import NDArray

from app.core.exceptions import DatasetError
from app.models.enums import PseudoKind
from app.models.geometry import VideoMeta
from app.models.video import MassMap, Video
from app.services.pseudo.base import PseudoContext, PseudoTrack

logger = logging.getLogger(__name__)


def grid_centroid(grid: NDArray[np.floating]) -> tuple[float, float] | None:
    """(h, w) 격자의 mass 중심 (격자 좌표 u, v). mass 가 없으면 None."""
    mass = np.asarray(grid, dtype=np.float64)
    total = float(mass.sum())
    if total <= 0.0:
        return None
    v_idx, u_idx = np.indices(mass.shape, dtype=np.float64)
    return (float((mass * u_idx).sum()) / total, float((mass * v_idx).sum()) / total)


def pp_independent_motion(
    mass_map: MassMap, frame: int, meta: VideoMeta
) -> tuple[float, float] | None:
    """frame 의 모션 중심 (픽셀 좌표, 프레임 안으로 클램프)."""
    centroid = grid_centroid(mass_map.grids[frame - 1])
    if centroid is None:
        return None
    u, v = centroid
    xy = meta.clamp_xy(np.array([(u + 0.5) * mass_map.downsample, (v + 0.5) * mass_map.downsample]))
    return (float(xy[0]), float(xy[1]))


def generate(video: Video, context: PseudoContext) -> PseudoTrack:
    meta = video.meta
    if video.mass_map is None:
        raise DatasetError(f"{video.video_id}: mass map 이 없습니다")
    if video.mass_map.frame_count != meta.frame_count:
        raise DatasetError(
            f"{video.video_id}: mass map 프레임 수 {video.mass_map.frame_count} 가 "
            f"비디오 길이 {meta.frame_count} 와 다릅니다"
        )

    payload = np.empty((meta.frame_count, 2), dtype=np.float64)
    degenerate: list[int] = []
    for frame in range(1, meta.frame_count + 1):
        point = pp_independent_motion(video.mass_map, frame, meta)
        if point is None:
            degenerate.append(frame)
            point = meta.center
        payload[frame - 1] = point
    if degenerate:
        logger.debug("%s: 모션이 없는 프레임 %d 개를 중심으로 대체", video.video_id, len(degenerate))
    return PseudoTrack(
        kind=PseudoKind.INDEPENDENT_MOTION, payload=payload, degenerate=frozenset(degenerate)
    )
