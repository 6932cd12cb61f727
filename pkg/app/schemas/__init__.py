"""Pydantic schemas for configuration and dataset files."""

from app.schemas.base import BaseSchema
from app.schemas.config import MiningConfig, RunConfig, SynthConfig
from app.schemas.dataset import (
    DatasetManifest,
    DetectionRecord,
    DetectionsFile,
    GroundTruthFile,
    InferenceFile,
    InferredDetectionRecord,
    PointRecord,
    PointsFile,
    ProposalsFile,
    TubeRecord,
    VideoEntry,
    VideoFiles,
    VideoMetaRecord,
)

__all__ = [
    "BaseSchema",
    # Config
    "MiningConfig",
    "RunConfig",
    "SynthConfig",
    # Dataset
    "DatasetManifest",
    "DetectionRecord",
    "DetectionsFile",
    "GroundTruthFile",
    "InferenceFile",
    "InferredDetectionRecord",
    "PointRecord",
    "PointsFile",
    "ProposalsFile",
    "TubeRecord",
    "VideoEntry",
    "VideoFiles",
    "VideoMetaRecord",
]
