"""pseudo-point 공통 타입."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from app.models.enums import PseudoKind
from app.models.geometry import PointTrack, VideoMeta


@dataclass(frozen=True, eq=False)
class PseudoTrack:
    """비디오 전 프레임에 대한 pseudo-point (사람 검출은 박스).

    payload: 프레임 1..F_V 순서의 (F_V, 2) 포인트 또는 (F_V, 4) 박스.
    degenerate: 대체값(프레임 중심 등)으로 채운 프레임 번호.
    """

    kind: PseudoKind
    payload: NDArray[np.float64] = field(repr=False)
    degenerate: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        payload = np.array(self.payload, dtype=np.float64, copy=True)
        width = 4 if self.kind.outputs_box else 2
        if payload.ndim != 2 or payload.shape[1] != width or payload.shape[0] == 0:
            raise ValueError(f"{self.kind.value}: payload 형태가 잘못되었습니다 {payload.shape}")
        payload.setflags(write=False)
        object.__setattr__(self, "payload", payload)
        object.__setattr__(self, "degenerate", frozenset(int(f) for f in self.degenerate))

    @property
    def frame_count(self) -> int:
        return int(self.payload.shape[0])

    @property
    def points(self) -> NDArray[np.float64]:
        """프레임별 포인트 (박스는 중심으로 축약)."""
        if self.kind.outputs_box:
            return np.stack(
                [
                    (self.payload[:, 0] + self.payload[:, 2]) / 2.0,
                    (self.payload[:, 1] + self.payload[:, 3]) / 2.0,
                ],
                axis=1,
            )
        return self.payload

    def as_point_track(self) -> PointTrack:
        return PointTrack(frames=np.arange(1, self.frame_count + 1), xy=self.points)


@dataclass(frozen=True)
class PseudoWeight:
    """pseudo-point 종류별 품질 점수 λ_P (선택 기준이자 재점수화 가중치)."""

    kind: PseudoKind
    lambda_p: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.lambda_p <= 1.0:
            raise ValueError(f"λ_P 는 [0, 1] 범위여야 합니다: {self.lambda_p}")


@dataclass(frozen=True)
class PseudoContext:
    """생성기가 비디오 밖에서 필요로 하는 정보.

    action: 점수화 중인 액션 (train_stats 가 사용)
    train_means: 액션별 학습 포인트 평균 (상대 좌표)
    """

    action: str | None = None
    train_means: Mapping[str, tuple[float, float]] = field(default_factory=dict)


def frame_center_fill(meta: VideoMeta) -> NDArray[np.float64]:
    """모든 프레임을 프레임 중심으로 채운 (F_V, 2) 배열."""
    cx, cy = meta.center
    return np.tile(np.array([cx, cy], dtype=np.float64), (meta.frame_count, 1))
