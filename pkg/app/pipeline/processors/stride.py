"""어노테이션 stride sweep.

학습 포인트를 stride 간격으로만 남겨 학습하고, 박스 어노테이션 대비 예상 절감률을 함께 기록합니다.
"""

import math
from typing import Any

import numpy as np

from app.config import settings
from app.pipeline.perturb import subsample_points
from app.pipeline.processors.base import BaseExperiment, SweepContext
from app.pipeline.registry import Registry


def annotation_speedup(
    stride: int,
    frames: int,
    label_seconds: float | None = None,
    box_seconds: float | None = None,
    point_seconds: float | None = None,
) -> float:
    """(라벨 + 박스·F) / (라벨 + 포인트·⌈F / stride⌉)."""
    if stride < 1 or frames < 1:
        raise ValueError(f"stride 와 프레임 수는 1 이상이어야 합니다: {stride}, {frames}")
    label = settings.label_seconds if label_seconds is None else label_seconds
    box = settings.box_seconds if box_seconds is None else box_seconds
    point = settings.point_seconds if point_seconds is None else point_seconds
    return (label + box * frames) / (label + point * math.ceil(frames / stride))


class StrideSweep(BaseExperiment):
    name = "stride"
    description = "어노테이션 stride (포인트 간격)"

    def rows(self, context: SweepContext) -> list[dict[str, Any]]:
        train = context.train
        spans = [len(v.points) for v in train if v.points is not None and len(v.points)]
        rows = []
        for stride in context.config.stride_grid:
            strided = [
                v.with_points(subsample_points(v.points, stride)) if v.points is not None else v
                for v in train
            ]
            kept = [len(v.points) for v in strided if v.points is not None]
            speedup = float(np.mean([annotation_speedup(stride, f) for f in spans])) if spans else 1.0
            rows.append(
                {
                    "stride": stride,
                    "points": int(sum(kept)),
                    "speedup": speedup,
                    **self.evaluate(context, strided, context.test),
                }
            )
        return rows


Registry.register(StrideSweep())
