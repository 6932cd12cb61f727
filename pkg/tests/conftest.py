"""공용 fixture 와 테스트용 비디오 생성 도우미."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
import pytest

from app.models.enums import Split
from app.models.geometry import PointTrack, Tube, VideoMeta
from app.models.video import Video
from app.schemas.config import MiningConfig, SynthConfig


def tube(start: int, *boxes: Sequence[float]) -> Tube:
    return Tube(start_frame=start, boxes=np.array(boxes, dtype=np.float64))


def still_tube(start: int, length: int, box: Sequence[float]) -> Tube:
    """같은 박스가 length 프레임 이어지는 튜브."""
    return Tube(start_frame=start, boxes=np.tile(np.asarray(box, dtype=np.float64), (length, 1)))


def points(entries: dict[int, tuple[float, float]]) -> PointTrack:
    return PointTrack.from_entries(entries)


def make_video(
    video_id: str,
    proposals: Sequence[Tube],
    features: np.ndarray | None = None,
    *,
    labels: Sequence[str] = ("a",),
    split: Split = Split.TRAIN,
    meta: VideoMeta | None = None,
    track: PointTrack | None = None,
    ground_truth: dict[str, tuple[Tube, ...]] | None = None,
    **extra: object,
) -> Video:
    if features is None:
        features = np.eye(len(proposals), max(len(proposals), 2))
    return Video(
        video_id=video_id,
        labels=tuple(labels),
        split=split,
        meta=meta or VideoMeta(10, 100, 100),
        proposals=tuple(proposals),
        features=features,
        points=track,
        ground_truth=ground_truth or {},
        **extra,  # type: ignore[arg-type]
    )


@pytest.fixture
def meta() -> VideoMeta:
    return VideoMeta(frame_count=10, width=100, height=100)


@pytest.fixture
def fast_mining() -> MiningConfig:
    """단위 테스트용 짧은 학습 설정."""
    return MiningConfig(iterations=3, folds=2, negatives_per_video=10, epochs=5, batch_size=16, seed=7)


@pytest.fixture
def tiny_synth() -> SynthConfig:
    """몇 초 안에 끝나는 합성 데이터셋."""
    return SynthConfig(
        seed=7,
        n_actions=2,
        train_per_action=4,
        test_per_action=3,
        frames_per_video=12,
        width=96,
        height=64,
        proposals_per_video=16,
        feature_dim=8,
        mass_downsample=8,
    )
