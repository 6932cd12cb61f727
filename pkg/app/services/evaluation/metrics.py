"""검출 라벨링과 AP / ROC AUC / mAP.

- 순위: 점수 내림차순, 동점이면 비디오 id, 액션 순.
- 라벨링: 순위대로 같은 비디오·액션의 아직 매칭되지 않은 GT 인스턴스 중 IoU 최대와 비교해
  τ 이상이면 양성으로 두고 그 인스턴스를 소비합니다.
- AP: 보간 없는 연속 VOC 방식, 양성 순위의 precision 합 / n_gt.
- AUC: Mann–Whitney (동점 0.5). 한 클래스만 있으면 None.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np
import pandas as pd
from sklearn.metrics import roc_auc_score

from app.core.exceptions import ConfigError, EmptyInputError
from app.models.detection import Detection, GroundTruth
from app.services.geometry.overlap import tube_iou

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LabeledDetection:
    video_id: str
    action: str
    score: float
    positive: bool
    iou: float


def rank_key(video_id: str, action: str, score: float) -> tuple[float, str, str]:
    return (-score, video_id, action)


def ranked(detections: Iterable[Detection]) -> list[Detection]:
    return sorted(detections, key=lambda d: rank_key(d.video_id, d.action, d.score))


def label_detections(
    detections: Iterable[Detection], gt: GroundTruth, tau: float
) -> list[LabeledDetection]:
    """순위 순서로 라벨링된 검출.

    Raises:
        DatasetError: GT 에 없는 비디오 id
    """
    if not 0.0 < tau <= 1.0:
        raise ConfigError(f"τ 는 (0, 1] 범위여야 합니다: {tau}")

    matched: dict[tuple[str, str], set[int]] = {}
    out: list[LabeledDetection] = []
    for det in ranked(detections):
        instances = gt.instances(det.video_id, det.action)
        used = matched.setdefault((det.video_id, det.action), set())
        ious = [tube_iou(det.tube, inst) for inst in instances]
        best_iou = max(ious, default=0.0)

        free = [(iou, i) for i, iou in enumerate(ious) if i not in used]
        positive = False
        if free:
            iou, index = max(free, key=lambda pair: (pair[0], -pair[1]))
            if iou >= tau:
                positive = True
                used.add(index)
        out.append(
            LabeledDetection(
                video_id=det.video_id,
                action=det.action,
                score=det.score,
                positive=positive,
                iou=best_iou,
            )
        )
    return out


def precision_sum_ap(labels: Sequence[bool], n_gt: int) -> float:
    """순위 순서 라벨의 연속 AP."""
    if n_gt < 1:
        raise ValueError(f"n_gt 는 1 이상이어야 합니다: {n_gt}")
    hits = np.asarray(labels, dtype=bool)
    if not hits.any():
        return 0.0
    tp = np.cumsum(hits)
    ranks = np.arange(1, hits.size + 1)
    return float(np.sum(tp[hits] / ranks[hits])) / n_gt


def average_precision(labeled: Sequence[LabeledDetection], n_gt: int) -> float:
    ordered = sorted(labeled, key=lambda d: rank_key(d.video_id, d.action, d.score))
    return precision_sum_ap([d.positive for d in ordered], n_gt)


def roc_auc(labeled: Sequence[LabeledDetection]) -> float | None:
    labels = np.array([d.positive for d in labeled], dtype=bool)
    if labels.size == 0 or labels.all() or not labels.any():
        return None
    scores = np.array([d.score for d in labeled], dtype=np.float64)
    return float(roc_auc_score(labels, scores))


def _actions(detections: Sequence[Detection], actions: Sequence[str] | None) -> list[str]:
    if actions is not None:
        return list(actions)
    return sorted({d.action for d in detections})


def per_action_table(
    detections: Sequence[Detection],
    gt: GroundTruth,
    taus: Sequence[float],
    actions: Sequence[str] | None = None,
) -> pd.DataFrame:
    """(action, tau, n_gt, ap, auc) 행. GT 인스턴스가 없는 액션은 제외합니다."""
    if not detections:
        raise EmptyInputError("평가할 검출이 없습니다 (빈 검출 집합)")

    rows: list[dict[str, object]] = []
    for action in _actions(detections, actions):
        n_gt = gt.count(action)
        if n_gt == 0:
            logger.warning("%s: GT 인스턴스가 없어 평가에서 제외합니다", action)
            continue
        subset = [d for d in detections if d.action == action]
        for tau in taus:
            labeled = label_detections(subset, gt, tau)
            rows.append(
                {
                    "action": action,
                    "tau": float(tau),
                    "n_gt": n_gt,
                    "ap": average_precision(labeled, n_gt),
                    "auc": roc_auc(labeled),
                }
            )
    if not rows:
        raise EmptyInputError("GT 인스턴스가 있는 액션이 없습니다")
    return pd.DataFrame(rows, columns=["action", "tau", "n_gt", "ap", "auc"])


def summary_table(table: pd.DataFrame) -> pd.DataFrame:
    """τ 별 mAP 와 평균 AUC (정의되지 않은 AUC 는 제외)."""
    grouped = table.groupby("tau", sort=True)
    out = pd.DataFrame(
        {
            "map": grouped["ap"].mean(),
            "mean_auc": grouped["auc"].apply(lambda s: pd.to_numeric(s, errors="coerce").mean()),
        }
    ).reset_index()
    return out


def map_over_thresholds(
    detections: Sequence[Detection],
    gt: GroundTruth,
    taus: Sequence[float],
    actions: Sequence[str] | None = None,
) -> dict[float, float]:
    """τ → 액션 평균 AP."""
    table = summary_table(per_action_table(detections, gt, taus, actions))
    return {float(t): float(m) for t, m in zip(table["tau"], table["map"], strict=True)}


def auc_over_thresholds(
    detections: Sequence[Detection],
    gt: GroundTruth,
    taus: Sequence[float],
    actions: Sequence[str] | None = None,
) -> dict[float, float | None]:
    """τ → 액션 평균 AUC (모든 액션이 단일 클래스면 None)."""
    table = summary_table(per_action_table(detections, gt, taus, actions))
    return {
        float(t): (None if pd.isna(a) else float(a))
        for t, a in zip(table["tau"], table["mean_auc"], strict=True)
    }
