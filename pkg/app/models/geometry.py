"""박스, 튜브, 포인트 트랙, 비디오 메타 값 타입.

모든 좌표는 프레임 좌상단 원점의 픽셀 실수 좌표이고, 프레임 번호는 1부터 시작합니다.
배열을 담는 타입은 생성 시 읽기 전용으로 고정됩니다.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.typing import NDArray


def _freeze(array: NDArray[Any]) -> NDArray[Any]:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, slots=True)
class Box2D:
    """프레임 내 축 정렬 박스 [xmin, ymin, xmax, ymax]."""

    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self) -> None:
        values = (self.xmin, self.ymin, self.xmax, self.ymax)
        if not all(math.isfinite(v) for v in values):
            raise ValueError(f"박스 좌표가 유한하지 않습니다: {values}")
        if not (self.xmin < self.xmax and self.ymin < self.ymax):
            raise ValueError(f"박스 좌표 순서가 잘못되었습니다: {values}")

    @property
    def width(self) -> float:
        return self.xmax - self.xmin

    @property
    def height(self) -> float:
        return self.ymax - self.ymin

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def center(self) -> tuple[float, float]:
        return ((self.xmin + self.xmax) / 2.0, (self.ymin + self.ymax) / 2.0)

    def contains(self, x: float, y: float) -> bool:
        """경계 포함 여부."""
        return self.xmin <= x <= self.xmax and self.ymin <= y <= self.ymax

    def as_list(self) -> list[float]:
        return [self.xmin, self.ymin, self.xmax, self.ymax]

    @classmethod
    def from_list(cls, values: Sequence[float]) -> Box2D:
        if len(values) != 4:
            raise ValueError(f"박스는 4개의 값이어야 합니다: {list(values)}")
        return cls(*(float(v) for v in values))


@dataclass(frozen=True, slots=True)
class VideoMeta:
    """비디오 프레임 수(F_V)와 프레임 크기(F_W × F_H)."""

    frame_count: int
    width: int
    height: int

    def __post_init__(self) -> None:
        if self.frame_count <= 0 or self.width <= 0 or self.height <= 0:
            raise ValueError(
                f"비디오 메타 값은 양수여야 합니다: "
                f"frames={self.frame_count}, size={self.width}x{self.height}"
            )

    @property
    def frame_area(self) -> float:
        return float(self.width * self.height)

    @property
    def center(self) -> tuple[float, float]:
        return (self.width / 2.0, self.height / 2.0)

    def clamp_xy(self, xy: NDArray[np.float64]) -> NDArray[np.float64]:
        """(…, 2) 좌표를 프레임 경계 [0, W] × [0, H] 로 클램프합니다."""
        out = np.array(xy, dtype=np.float64, copy=True)
        out[..., 0] = np.clip(out[..., 0], 0.0, float(self.width))
        out[..., 1] = np.clip(out[..., 1], 0.0, float(self.height))
        return out


@dataclass(frozen=True, eq=False)
class Tube:
    """연속된 프레임에 걸친 박스 시퀀스 (proposal 과 ground truth 의 단위).

    boxes: (n, 4) 배열, 행 i 가 start_frame + i 프레임의 박스.
    """

    start_frame: int
    boxes: NDArray[np.float64]

    def __post_init__(self) -> None:
        boxes = np.array(self.boxes, dtype=np.float64, copy=True)
        if boxes.ndim != 2 or boxes.shape[1] != 4 or boxes.shape[0] == 0:
            raise ValueError(f"튜브 박스 배열 형태가 잘못되었습니다: {boxes.shape}")
        if int(self.start_frame) < 1:
            raise ValueError(f"start_frame 은 1 이상이어야 합니다: {self.start_frame}")
        if not np.all(np.isfinite(boxes)):
            raise ValueError("튜브 박스에 유한하지 않은 좌표가 있습니다")
        if np.any(boxes[:, 0] >= boxes[:, 2]) or np.any(boxes[:, 1] >= boxes[:, 3]):
            raise ValueError("튜브 박스 좌표 순서가 잘못되었습니다 (xmin < xmax, ymin < ymax)")
        object.__setattr__(self, "start_frame", int(self.start_frame))
        object.__setattr__(self, "boxes", _freeze(boxes))

    def __len__(self) -> int:
        return int(self.boxes.shape[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tube):
            return NotImplemented
        return self.start_frame == other.start_frame and np.array_equal(self.boxes, other.boxes)

    __hash__ = None  # type: ignore[assignment]

    @property
    def end_frame(self) -> int:
        return self.start_frame + len(self) - 1

    @property
    def frames(self) -> NDArray[np.int64]:
        return np.arange(self.start_frame, self.end_frame + 1, dtype=np.int64)

    @property
    def areas(self) -> NDArray[np.float64]:
        return (self.boxes[:, 2] - self.boxes[:, 0]) * (self.boxes[:, 3] - self.boxes[:, 1])

    @property
    def centers(self) -> NDArray[np.float64]:
        return np.stack(
            [(self.boxes[:, 0] + self.boxes[:, 2]) / 2.0, (self.boxes[:, 1] + self.boxes[:, 3]) / 2.0],
            axis=1,
        )

    def covers(self, frame: int) -> bool:
        return self.start_frame <= frame <= self.end_frame

    def box_at(self, frame: int) -> Box2D:
        if not self.covers(frame):
            raise KeyError(f"튜브가 프레임 {frame} 을 포함하지 않습니다")
        return Box2D.from_list(self.boxes[frame - self.start_frame].tolist())

    def relative_extent(self, meta: VideoMeta) -> float:
        """비디오 길이 대비 튜브 길이 비율."""
        return len(self) / meta.frame_count

    def validate_within(self, meta: VideoMeta) -> None:
        if self.end_frame > meta.frame_count:
            raise ValueError(
                f"튜브 끝 프레임 {self.end_frame} 이 비디오 길이 {meta.frame_count} 를 넘습니다"
            )

    def to_record(self) -> dict[str, Any]:
        return {"start_frame": self.start_frame, "boxes": self.boxes.tolist()}

    @classmethod
    def from_record(cls, record: Mapping[str, Any]) -> Tube:
        return cls(start_frame=int(record["start_frame"]), boxes=np.asarray(record["boxes"]))


@dataclass(frozen=True, eq=False)
class PointTrack:
    """한 비디오의 희소 프레임별 포인트 어노테이션.

    frames: (K,) 오름차순 고유 프레임 번호, xy: (K, 2) 픽셀 좌표.
    """

    frames: NDArray[np.int64]
    xy: NDArray[np.float64] = field(repr=False)

    def __post_init__(self) -> None:
        frames = np.array(self.frames, dtype=np.int64, copy=True).reshape(-1)
        xy = np.array(self.xy, dtype=np.float64, copy=True).reshape(-1, 2)
        if frames.shape[0] != xy.shape[0]:
            raise ValueError(f"프레임 수({frames.shape[0]})와 포인트 수({xy.shape[0]})가 다릅니다")
        if frames.size and np.any(frames < 1):
            raise ValueError("포인트 프레임 번호는 1 이상이어야 합니다")
        order = np.argsort(frames, kind="stable")
        frames, xy = frames[order], xy[order]
        if frames.size > 1 and np.any(np.diff(frames) == 0):
            raise ValueError("한 프레임에 포인트가 두 개 이상 있습니다")
        if not np.all(np.isfinite(xy)):
            raise ValueError("포인트 좌표가 유한하지 않습니다")
        object.__setattr__(self, "frames", _freeze(frames))
        object.__setattr__(self, "xy", _freeze(xy))

    def __len__(self) -> int:
        return int(self.frames.shape[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PointTrack):
            return NotImplemented
        return np.array_equal(self.frames, other.frames) and np.array_equal(self.xy, other.xy)

    __hash__ = None  # type: ignore[assignment]

    @property
    def first_frame(self) -> int:
        return int(self.frames[0])

    @property
    def last_frame(self) -> int:
        return int(self.frames[-1])

    @property
    def entries(self) -> dict[int, tuple[float, float]]:
        return {int(f): (float(x), float(y)) for f, (x, y) in zip(self.frames, self.xy, strict=True)}

    def validate_within(self, meta: VideoMeta) -> None:
        if len(self) and self.last_frame > meta.frame_count:
            raise ValueError(
                f"포인트 프레임 {self.last_frame} 이 비디오 길이 {meta.frame_count} 를 넘습니다"
            )

    def to_records(self) -> list[dict[str, float | int]]:
        return [
            {"frame": int(f), "x": float(x), "y": float(y)}
            for f, (x, y) in zip(self.frames, self.xy, strict=True)
        ]

    @classmethod
    def from_records(cls, records: Iterable[Mapping[str, Any]]) -> PointTrack:
        rows = list(records)
        return cls(
            frames=np.array([int(r["frame"]) for r in rows], dtype=np.int64),
            xy=np.array([[float(r["x"]), float(r["y"])] for r in rows], dtype=np.float64),
        )

    @classmethod
    def from_entries(cls, entries: Mapping[int, tuple[float, float]]) -> PointTrack:
        frames = sorted(entries)
        return cls(
            frames=np.array(frames, dtype=np.int64),
            xy=np.array([entries[f] for f in frames], dtype=np.float64).reshape(-1, 2),
        )
