"""비디오 단위 데이터: proposal, 특징, 포인트, GT, 외부 단서(사람 검출, 모션 mass map)."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field, replace

import numpy as np
from numpy.typing import NDArray

from app.models.enums import Split
from app.models.geometry import Box2D, PointTrack, Tube, VideoMeta


@dataclass(frozen=True, slots=True)
class DetectionBox:
    """외부 사람 검출기의 프레임별 박스와 신뢰도."""

    frame: int
    box: Box2D
    confidence: float

    def __post_init__(self) -> None:
        if not np.isfinite(self.confidence):
            raise ValueError(f"검출 신뢰도가 유한하지 않습니다: {self.confidence}")


@dataclass(frozen=True, eq=False)
class MassMap:
    """프레임별 독립 모션 mass (다운샘플 격자).

    grids: (F_V, grid_h, grid_w) 음이 아닌 값. 격자 (u, v) 셀의 픽셀 중심은
    ((u + 0.5) · downsample, (v + 0.5) · downsample).
    """

    grids: NDArray[np.float32]
    downsample: int

    def __post_init__(self) -> None:
        grids = np.array(self.grids, dtype=np.float32, copy=True)
        if grids.ndim != 3:
            raise ValueError(f"mass map 은 (frames, h, w) 형태여야 합니다: {grids.shape}")
        if self.downsample < 1:
            raise ValueError(f"다운샘플 배율은 1 이상이어야 합니다: {self.downsample}")
        if np.any(grids < 0) or not np.all(np.isfinite(grids)):
            raise ValueError("mass map 값은 유한한 음이 아닌 실수여야 합니다")
        grids.setflags(write=False)
        object.__setattr__(self, "grids", grids)

    @property
    def frame_count(self) -> int:
        return int(self.grids.shape[0])

    @property
    def grid_height(self) -> int:
        return int(self.grids.shape[1])

    @property
    def grid_width(self) -> int:
        return int(self.grids.shape[2])


@dataclass(frozen=True, eq=False)
class Video:
    """데이터셋의 비디오 한 개.

    features 는 proposals 와 같은 순서의 (n, D) 행렬이며 로드 시 L2 정규화됩니다.
    labels 는 다중 라벨을 허용하고, ground_truth 는 액션별 GT 튜브(다중 인스턴스)입니다.
    """

    video_id: str
    labels: tuple[str, ...]
    split: Split
    meta: VideoMeta
    proposals: tuple[Tube, ...]
    features: NDArray[np.float64] = field(repr=False)
    points: PointTrack | None = None
    ground_truth: Mapping[str, tuple[Tube, ...]] = field(default_factory=dict)
    detections: tuple[DetectionBox, ...] = ()
    mass_map: MassMap | None = None

    def __post_init__(self) -> None:
        features = np.array(self.features, dtype=np.float64, copy=True)
        if features.ndim != 2 or features.shape[0] != len(self.proposals):
            raise ValueError(
                f"{self.video_id}: 특징 행 수({features.shape[0] if features.ndim else 0})와 "
                f"proposal 수({len(self.proposals)})가 다릅니다"
            )
        if not self.proposals:
            raise ValueError(f"{self.video_id}: proposal 이 없습니다")
        features.setflags(write=False)
        object.__setattr__(self, "features", features)

    @property
    def feature_dim(self) -> int:
        return int(self.features.shape[1])

    def has_label(self, action: str) -> bool:
        return action in self.labels

    def gt_tubes(self, action: str) -> tuple[Tube, ...]:
        return tuple(self.ground_truth.get(action, ()))

    def with_points(self, points: PointTrack | None) -> Video:
        return replace(self, points=points)

    def with_proposals(self, keep: NDArray[np.int64]) -> Video:
        """keep 인덱스의 proposal 과 특징만 남긴 사본."""
        keep = np.asarray(keep, dtype=np.int64)
        return replace(
            self,
            proposals=tuple(self.proposals[int(i)] for i in keep),
            features=self.features[keep],
        )
