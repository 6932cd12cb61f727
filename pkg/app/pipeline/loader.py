"""데이터셋 적재/저장 모듈.

매니페스트(manifest.json)와 비디오별 파일을 읽어 Video 값으로 만들고, 반대로 저장합니다.
특징은 로드 시 L2 정규화되며, 저장은 비디오 단위로 원자적으로 이루어집니다.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from app.core.exceptions import DatasetError, DimensionMismatchError
from app.models.detection import GroundTruth
from app.models.enums import Split
from app.models.geometry import Box2D, PointTrack, Tube, VideoMeta
from app.models.video import DetectionBox, Video
from app.pipeline.file_utils import (
    l2_normalize,
    read_features,
    read_json,
    read_mass_map,
    write_features,
    write_json,
    write_mass_map,
)
from app.schemas.dataset import (
    DatasetManifest,
    DetectionRecord,
    DetectionsFile,
    GroundTruthFile,
    PointRecord,
    PointsFile,
    ProposalsFile,
    TubeRecord,
    VideoEntry,
    VideoFiles,
    VideoMetaRecord,
)

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


@dataclass(frozen=True)
class Dataset:
    """로드된 데이터셋."""

    root: Path
    actions: tuple[str, ...]
    videos: tuple[Video, ...]

    def split(self, split: Split) -> list[Video]:
        return [v for v in self.videos if v.split is split]

    @property
    def train(self) -> list[Video]:
        return self.split(Split.TRAIN)

    @property
    def test(self) -> list[Video]:
        return self.split(Split.TEST)

    @property
    def feature_dim(self) -> int:
        return self.videos[0].feature_dim

    def video(self, video_id: str) -> Video:
        for video in self.videos:
            if video.video_id == video_id:
                return video
        raise DatasetError(f"데이터셋에 없는 비디오 id: {video_id}")

    def ground_truth(self, split: Split = Split.TEST) -> GroundTruth:
        return ground_truth_of(self.split(split))


def ground_truth_of(videos: Iterable[Video]) -> GroundTruth:
    return GroundTruth({v.video_id: dict(v.ground_truth) for v in videos})


def manifest_path(path: Path) -> Path:
    return path / MANIFEST_NAME if path.is_dir() else path


# ── 로드 ──


def _tube(record: TubeRecord, meta: VideoMeta, where: Path) -> Tube:
    try:
        tube = Tube(start_frame=record.start_frame, boxes=np.asarray(record.boxes, dtype=np.float64))
        tube.validate_within(meta)
    except ValueError as e:
        raise DatasetError(f"{where}: {e}") from e
    return tube


def _check_id(entry: VideoEntry, found: str, where: Path) -> None:
    if found != entry.id:
        raise DatasetError(f"{where}: video_id '{found}' 가 매니페스트 id '{entry.id}' 와 다릅니다")


def load_video(root: Path, entry: VideoEntry, *, normalize: bool = True) -> Video:
    """매니페스트 항목 하나의 파일들을 읽어 Video 를 만듭니다."""
    meta = VideoMeta(entry.meta.frame_count, entry.meta.width, entry.meta.height)
    files = entry.files

    path = root / files.proposals
    proposals_file = read_json(path, ProposalsFile)
    _check_id(entry, proposals_file.video_id, path)
    proposals = tuple(_tube(t, meta, path) for t in proposals_file.tubes)

    path = root / files.features
    raw = read_features(path)
    if raw.shape[0] != len(proposals):
        raise DatasetError(f"{path}: 특징 {raw.shape[0]} 행이 proposal {len(proposals)} 개와 다릅니다")
    features = l2_normalize(raw) if normalize else raw.astype(np.float64)

    points = None
    if files.points:
        path = root / files.points
        points_file = read_json(path, PointsFile)
        _check_id(entry, points_file.video_id, path)
        points = PointTrack.from_records(p.model_dump() for p in points_file.points)
        try:
            points.validate_within(meta)
        except ValueError as e:
            raise DatasetError(f"{path}: {e}") from e

    ground_truth: dict[str, tuple[Tube, ...]] = {}
    if files.ground_truth:
        path = root / files.ground_truth
        gt_file = read_json(path, GroundTruthFile)
        _check_id(entry, gt_file.video_id, path)
        for action, tubes in sorted(gt_file.tubes.items()):
            if action not in entry.labels:
                raise DatasetError(f"{path}: 라벨에 없는 액션 '{action}' 의 GT")
            ground_truth[action] = tuple(_tube(t, meta, path) for t in tubes)

    detections: tuple[DetectionBox, ...] = ()
    if files.detections:
        path = root / files.detections
        det_file = read_json(path, DetectionsFile)
        _check_id(entry, det_file.video_id, path)
        try:
            detections = tuple(
                DetectionBox(frame=d.frame, box=Box2D.from_list(d.box), confidence=d.confidence)
                for d in det_file.detections
            )
        except ValueError as e:
            raise DatasetError(f"{path}: 잘못된 검출 레코드: {e}") from e

    mass_map = None
    if files.mass_map:
        path = root / files.mass_map
        mass_map = read_mass_map(path)
        if mass_map.frame_count != meta.frame_count:
            raise DatasetError(
                f"{path}: 프레임 수 {mass_map.frame_count} 가 비디오 길이 {meta.frame_count} 와 다릅니다"
            )

    return Video(
        video_id=entry.id,
        labels=tuple(entry.labels),
        split=entry.split,
        meta=meta,
        proposals=proposals,
        features=features,
        points=points,
        ground_truth=ground_truth,
        detections=detections,
        mass_map=mass_map,
    )


def load_manifest(path: Path) -> DatasetManifest:
    return read_json(manifest_path(path), DatasetManifest)


def load_dataset(path: Path, *, normalize: bool = True) -> Dataset:
    """매니페스트 파일(또는 그 디렉토리)에서 데이터셋 전체를 읽습니다.

    Raises:
        DatasetError: 파일 누락, 스키마 위반
        DimensionMismatchError: 비디오 간 특징 차원이 다를 때
    """
    mpath = manifest_path(path)
    manifest = load_manifest(mpath)
    root = mpath.parent
    if not manifest.videos:
        raise DatasetError(f"{mpath}: 비디오가 없습니다")

    videos = tuple(load_video(root, entry, normalize=normalize) for entry in manifest.videos)
    dims = {v.feature_dim for v in videos}
    if len(dims) != 1:
        raise DimensionMismatchError(f"{mpath}: 비디오마다 특징 차원이 다릅니다 {sorted(dims)}")

    logger.info("데이터셋 로드: %s (비디오 %d, 액션 %d)", mpath, len(videos), len(manifest.actions))
    return Dataset(root=root, actions=tuple(manifest.actions), videos=videos)


# ── 저장 ──


def _tube_record(tube: Tube) -> TubeRecord:
    return TubeRecord(start_frame=tube.start_frame, boxes=tube.boxes.tolist())


def save_video(root: Path, video: Video, *, features: np.ndarray | None = None) -> VideoEntry:
    """비디오 파일을 videos/<id>/ 아래에 쓰고 매니페스트 항목을 돌려줍니다.

    features 를 주면 video.features 대신 그 행렬을 그대로 저장합니다.
    """
    rel = Path("videos") / video.video_id
    folder = root / rel

    write_json(
        folder / "proposals.json",
        ProposalsFile(video_id=video.video_id, tubes=[_tube_record(t) for t in video.proposals]),
    )
    write_features(folder / "features.bin", video.features if features is None else features)

    files: dict[str, str] = {
        "proposals": (rel / "proposals.json").as_posix(),
        "features": (rel / "features.bin").as_posix(),
    }
    if video.points is not None:
        write_json(
            folder / "points.json",
            PointsFile(
                video_id=video.video_id,
                points=[PointRecord.model_validate(r) for r in video.points.to_records()],
            ),
        )
        files["points"] = (rel / "points.json").as_posix()
    if video.ground_truth:
        write_json(
            folder / "ground_truth.json",
            GroundTruthFile(
                video_id=video.video_id,
                tubes={a: [_tube_record(t) for t in ts] for a, ts in sorted(video.ground_truth.items())},
            ),
        )
        files["ground_truth"] = (rel / "ground_truth.json").as_posix()
    if video.detections:
        write_json(
            folder / "detections.json",
            DetectionsFile(
                video_id=video.video_id,
                detections=[
                    DetectionRecord(frame=d.frame, box=d.box.as_list(), confidence=d.confidence)
                    for d in video.detections
                ],
            ),
        )
        files["detections"] = (rel / "detections.json").as_posix()
    if video.mass_map is not None:
        write_mass_map(folder / "mass.bin", video.mass_map)
        files["mass_map"] = (rel / "mass.bin").as_posix()

    return VideoEntry(
        id=video.video_id,
        meta=VideoMetaRecord(
            frame_count=video.meta.frame_count, width=video.meta.width, height=video.meta.height
        ),
        split=video.split,
        labels=list(video.labels),
        files=VideoFiles(**files),
    )


def save_dataset(root: Path, actions: Sequence[str], videos: Sequence[Video]) -> Path:
    """모든 비디오와 매니페스트를 저장하고 매니페스트 경로를 돌려줍니다."""
    entries = [save_video(root, v) for v in videos]
    manifest = DatasetManifest(actions=list(actions), videos=entries)
    path = root / MANIFEST_NAME
    write_json(path, manifest)
    return path


def mass_map_shape(meta: VideoMeta, downsample: int) -> tuple[int, int]:
    """(grid_h, grid_w)."""
    return (-(-meta.height // downsample), -(-meta.width // downsample))
