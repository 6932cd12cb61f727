"""데이터셋 파일 스키마.

- 매니페스트: UTF-8 JSON, DatasetManifest 필드 그대로.
- 비디오별 proposal / point / GT / 검출: UTF-8 JSON.
  박스는 [xmin, ymin, xmax, ymax], 튜브는 {start_frame, boxes}, 포인트는 {frame, x, y},
  검출은 {frame, box, confidence}.
"""

from typing import Annotated

from pydantic import Field, field_validator, model_validator

from app.models.enums import Split
from app.schemas.base import BaseSchema, BoxList, Finite


class VideoMetaRecord(BaseSchema):
    frame_count: Annotated[int, Field(gt=0)]
    width: Annotated[int, Field(gt=0)]
    height: Annotated[int, Field(gt=0)]


class TubeRecord(BaseSchema):
    start_frame: Annotated[int, Field(ge=1)]
    boxes: Annotated[list[BoxList], Field(min_length=1)]

    @field_validator("boxes")
    @classmethod
    def _four_values(cls, boxes: list[list[float]]) -> list[list[float]]:
        for box in boxes:
            if len(box) != 4:
                raise ValueError(f"박스는 4개의 값이어야 합니다: {box}")
        return boxes


class PointRecord(BaseSchema):
    frame: Annotated[int, Field(ge=1)]
    x: Finite
    y: Finite


class DetectionRecord(BaseSchema):
    frame: Annotated[int, Field(ge=1)]
    box: BoxList
    confidence: Finite


class ProposalsFile(BaseSchema):
    video_id: str
    tubes: Annotated[list[TubeRecord], Field(min_length=1)]


class PointsFile(BaseSchema):
    video_id: str
    points: list[PointRecord]

    @field_validator("points")
    @classmethod
    def _unique_frames(cls, points: list[PointRecord]) -> list[PointRecord]:
        frames = [p.frame for p in points]
        if len(frames) != len(set(frames)):
            raise ValueError("한 프레임에 포인트가 두 개 이상 있습니다")
        return points


class GroundTruthFile(BaseSchema):
    video_id: str
    tubes: dict[str, list[TubeRecord]]


class DetectionsFile(BaseSchema):
    video_id: str
    detections: list[DetectionRecord]


class VideoFiles(BaseSchema):
    """매니페스트 디렉토리 기준 상대 경로."""

    proposals: str
    features: str
    points: str | None = None
    ground_truth: str | None = None
    detections: str | None = None
    mass_map: str | None = None


class VideoEntry(BaseSchema):
    id: str
    meta: VideoMetaRecord
    split: Split
    labels: Annotated[list[str], Field(min_length=1)]
    files: VideoFiles


class DatasetManifest(BaseSchema):
    actions: Annotated[list[str], Field(min_length=1)]
    videos: list[VideoEntry]

    @model_validator(mode="after")
    def _consistent(self) -> "DatasetManifest":
        ids = [v.id for v in self.videos]
        if len(ids) != len(set(ids)):
            raise ValueError("비디오 id 가 중복되었습니다")
        if len(self.actions) != len(set(self.actions)):
            raise ValueError("액션 이름이 중복되었습니다")
        known = set(self.actions)
        for video in self.videos:
            unknown = set(video.labels) - known
            if unknown:
                raise ValueError(f"{video.id}: 알 수 없는 액션 라벨 {sorted(unknown)}")
        return self


class InferredDetectionRecord(BaseSchema):
    """추론 결과: 액션별 테스트 비디오의 top-1 proposal."""

    video_id: str
    action: str
    score: Finite
    proposal_index: Annotated[int, Field(ge=0)]
    tube: TubeRecord


class InferenceFile(BaseSchema):
    detections: list[InferredDetectionRecord]
