"""Domain models."""

from app.models.detection import Detection, GroundTruth
from app.models.enums import ErrorType, Prior, PseudoKind, Split
from app.models.geometry import Box2D, PointTrack, Tube, VideoMeta
from app.models.linear import LinearModel
from app.models.video import DetectionBox, MassMap, Video

__all__ = [
    # Enums
    "ErrorType",
    "Prior",
    "PseudoKind",
    "Split",
    # Geometry
    "Box2D",
    "PointTrack",
    "Tube",
    "VideoMeta",
    # Video
    "DetectionBox",
    "MassMap",
    "Video",
    # Mining / Evaluation
    "LinearModel",
    "Detection",
    "GroundTruth",
]
