"""검출 평가 (AP / AUC / mAP) 와 오류 진단."""

from app.services.evaluation.diagnosis import classify, diagnose, error_table
from app.services.evaluation.metrics import (
    LabeledDetection,
    auc_over_thresholds,
    average_precision,
    label_detections,
    map_over_thresholds,
    per_action_table,
    precision_sum_ap,
    roc_auc,
    summary_table,
)

__all__ = [
    "LabeledDetection",
    "auc_over_thresholds",
    "average_precision",
    "classify",
    "diagnose",
    "error_table",
    "label_detections",
    "map_over_thresholds",
    "per_action_table",
    "precision_sum_ap",
    "roc_auc",
    "summary_table",
]
