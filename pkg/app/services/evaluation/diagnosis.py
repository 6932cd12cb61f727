"""top-R 검출 오류 진단.

액션마다 순위 상위 R 개 (R = 그 액션의 GT 인스턴스 수) 검출을 다섯 유형으로 나눕니다.
  - 양성 비디오 (그 액션 GT 가 있음): IoU ≥ τ correct, [inner, τ) localization, < inner background_own
  - 음성 비디오: 다른 액션 GT 와 IoU ≥ inner 면 confusion, 아니면 background_other
"""

from __future__ import annotations

from collections.abc import Sequence

import pandas as pd

from app.config import settings
from app.core.exceptions import ConfigError
from app.models.detection import Detection, GroundTruth
from app.models.enums import ErrorType
from app.services.evaluation.metrics import ranked
from app.services.geometry.overlap import tube_iou


def classify(
    det: Detection, gt: GroundTruth, tau: float, inner: float | None = None
) -> ErrorType:
    inner = settings.diagnose_inner_threshold if inner is None else inner
    own = gt.instances(det.video_id, det.action)
    if own:
        iou = max(tube_iou(det.tube, t) for t in own)
        if iou >= tau:
            return ErrorType.CORRECT
        if iou >= inner:
            return ErrorType.LOCALIZATION
        return ErrorType.BACKGROUND_OWN

    others = gt.other_instances(det.video_id, det.action)
    if any(tube_iou(det.tube, t) >= inner for t in others):
        return ErrorType.CONFUSION
    return ErrorType.BACKGROUND_OTHER


def diagnose(
    detections: Sequence[Detection],
    gt: GroundTruth,
    tau: float,
    inner: float | None = None,
) -> dict[ErrorType, int]:
    """상위 R 검출의 유형별 개수 (합은 액션별 min(R, 검출 수) 의 합)."""
    inner = settings.diagnose_inner_threshold if inner is None else inner
    if tau < inner or tau > 1.0:
        raise ConfigError(f"오류 진단의 τ 는 [{inner}, 1] 범위여야 합니다: {tau}")

    counts = dict.fromkeys(ErrorType, 0)
    for action in sorted({d.action for d in detections}):
        top = ranked(d for d in detections if d.action == action)[: gt.count(action)]
        for det in top:
            counts[classify(det, gt, tau, inner)] += 1
    return counts


def error_table(
    detections: Sequence[Detection], gt: GroundTruth, taus: Sequence[float]
) -> pd.DataFrame:
    """τ 별 오류 유형 히스토그램."""
    rows = []
    for tau in taus:
        counts = diagnose(detections, gt, tau)
        rows.append({"tau": float(tau), **{k.value: v for k, v in counts.items()}})
    return pd.DataFrame(rows, columns=["tau", *(k.value for k in ErrorType)])
