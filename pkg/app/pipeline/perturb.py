"""포인트/proposal 교란: 포인트 잡음, 어노테이션 stride, 저품질 proposal 제거."""

from __future__ import annotations

import logging
import math

import numpy as np

from app.core.exceptions import DatasetError
from app.models.geometry import PointTrack, VideoMeta
from app.models.video import Video
from app.services.geometry.overlap import max_tube_ious
from app.utils.random import gaussian, stream

logger = logging.getLogger(__name__)

LOW_QUALITY_IOU = 0.5


def perturb_points(track: PointTrack, sigma: float, seed: int, meta: VideoMeta) -> PointTrack:
    """각 포인트에 N(0, σ²I) 잡음을 더하고 프레임 안으로 클램프합니다."""
    if sigma < 0:
        raise ValueError(f"σ 는 0 이상이어야 합니다: {sigma}")
    if sigma == 0 or len(track) == 0:
        return track
    noise = gaussian(stream(seed, "perturb"), (len(track), 2), sigma)
    return PointTrack(frames=track.frames, xy=meta.clamp_xy(track.xy + noise))


def subsample_points(track: PointTrack, stride: int) -> PointTrack:
    """첫 어노테이션 프레임부터 stride 간격의 프레임만 남깁니다."""
    if stride < 1:
        raise ValueError(f"stride 는 1 이상이어야 합니다: {stride}")
    if stride == 1 or len(track) == 0:
        return track
    keep = (track.frames - track.first_frame) % stride == 0
    return PointTrack(frames=track.frames[keep], xy=track.xy[keep])


def low_quality_indices(video: Video) -> np.ndarray:
    """라벨 액션 GT 와의 최대 tube IoU 가 0.5 이하인 proposal 인덱스."""
    gts = [tube for action in video.labels for tube in video.gt_tubes(action)]
    if not gts:
        raise DatasetError(f"{video.video_id}: GT 가 없어 proposal 품질을 잴 수 없습니다")
    return np.flatnonzero(max_tube_ious(video.proposals, gts) <= LOW_QUALITY_IOU)


def filter_low_quality(video: Video, epsilon: float, seed: int) -> Video:
    """저품질 proposal 중 ⌊ε · n_low⌋ 개를 균등하게 제거한 사본."""
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"ε 는 [0, 1] 범위여야 합니다: {epsilon}")
    if epsilon == 0:
        return video

    low = low_quality_indices(video)
    n_remove = math.floor(epsilon * low.size + 1e-9)
    if n_remove == 0:
        return video
    if n_remove == len(video.proposals):
        # 비디오에는 proposal 이 최소 하나 남아야 한다
        n_remove -= 1
        logger.warning("%s: 모든 proposal 이 저품질이라 하나를 남깁니다", video.video_id)

    rng = stream(seed, "filter", video.video_id)
    removed = set(rng.choice(low, size=n_remove, replace=False).tolist())
    keep = np.array([i for i in range(len(video.proposals)) if i not in removed], dtype=np.int64)
    return video.with_proposals(keep)
