"""박스/튜브 기하와 point 겹침 측도."""

from app.services.geometry.overlap import (
    box_iou,
    boxes_iou,
    center_match,
    center_match_terms,
    max_tube_ious,
    overlap,
    overlaps,
    size_regularizer,
    tube_iou,
    tube_ious,
)

__all__ = [
    "box_iou",
    "boxes_iou",
    "center_match",
    "center_match_terms",
    "max_tube_ious",
    "overlap",
    "overlaps",
    "size_regularizer",
    "tube_iou",
    "tube_ious",
]
