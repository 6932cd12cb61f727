"""검출 라벨링, AP / AUC / mAP, 오류 진단 테스트."""

import pytest

from app.core.exceptions import DatasetError, EmptyInputError
from app.models.detection import Detection, GroundTruth
from app.models.enums import ErrorType
from app.services.evaluation import (
    LabeledDetection,
    auc_over_thresholds,
    average_precision,
    classify,
    diagnose,
    error_table,
    label_detections,
    map_over_thresholds,
    per_action_table,
    precision_sum_ap,
    roc_auc,
)
from app.utils.random import stream
from tests.conftest import tube

GT_BOX = [0, 0, 10, 10]


def det(video_id, action, score, box, start=1):
    return Detection(video_id=video_id, action=action, score=score, tube=tube(start, box))


def labeled(score, positive):
    return LabeledDetection(video_id="v", action="a", score=score, positive=positive, iou=0.0)


@pytest.fixture
def gt():
    return GroundTruth(
        {
            "v1": {"a": [tube(1, GT_BOX)]},
            "v2": {"b": [tube(1, GT_BOX)]},
            "v3": {},
        }
    )


# ── AP / AUC ──


def test_ap_example():
    assert precision_sum_ap([True, False, True], 2) == pytest.approx((1 + 2 / 3) / 2)
    assert precision_sum_ap([False, False], 3) == 0.0
    assert precision_sum_ap([True, True], 2) == 1.0


def test_ap_rejects_empty_ground_truth():
    with pytest.raises(ValueError):
        precision_sum_ap([True], 0)


def test_average_precision_sorts_by_score():
    rows = [labeled(0.2, True), labeled(0.9, True), labeled(0.5, False)]
    assert average_precision(rows, 2) == pytest.approx((1 + 2 / 3) / 2)


def test_auc_examples():
    rows = [labeled(0.9, True), labeled(0.4, True), labeled(0.6, False)]
    assert roc_auc(rows) == pytest.approx(0.5)
    ties = [labeled(0.5, True), labeled(0.5, False), labeled(0.5, True)]
    assert roc_auc(ties) == pytest.approx(0.5)
    assert roc_auc([labeled(0.9, True), labeled(0.1, False)]) == 1.0


def test_auc_undefined_for_single_class():
    assert roc_auc([labeled(0.9, True), labeled(0.4, True)]) is None
    assert roc_auc([labeled(0.9, False)]) is None
    assert roc_auc([]) is None


# ── 라벨링 ──


def test_greedy_matching_consumes_instances():
    # IoU 0.6 인 검출이 점수가 높아 인스턴스를 먼저 가져간다
    gt = GroundTruth({"v": {"a": [tube(1, GT_BOX)]}})
    dets = [det("v", "a", 0.9, [0, 0, 10, 6]), det("v", "a", 0.8, [0, 0, 10, 7])]
    rows = label_detections(dets, gt, 0.5)
    assert [r.positive for r in rows] == [True, False]
    assert rows[0].iou == pytest.approx(0.6)
    assert rows[1].iou == pytest.approx(0.7)
    assert average_precision(rows, 1) == 1.0


def test_matching_prefers_best_free_instance():
    gt = GroundTruth({"v": {"a": [tube(1, GT_BOX), tube(1, [0, 0, 10, 8])]}})
    dets = [det("v", "a", 0.9, [0, 0, 10, 10]), det("v", "a", 0.8, [0, 0, 10, 10])]
    rows = label_detections(dets, gt, 0.5)
    assert [r.positive for r in rows] == [True, True]


def test_label_detections_rejects_unknown_video(gt):
    with pytest.raises(DatasetError):
        label_detections([det("nope", "a", 1.0, GT_BOX)], gt, 0.5)


def test_label_detections_tau_range(gt):
    with pytest.raises(ValueError):
        label_detections([det("v1", "a", 1.0, GT_BOX)], gt, 0.0)


def test_positives_shrink_as_tau_grows():
    rng = stream(41, "test", "tau")
    instances = {f"v{i}": {"a": [tube(1, GT_BOX)]} for i in range(30)}
    gt = GroundTruth(instances)
    dets = []
    for i in range(30):
        w = float(rng.integers(1, 11))
        dets.append(det(f"v{i}", "a", float(rng.uniform()), [0, 0, w, 10]))

    previous = None
    for tau in (0.1, 0.2, 0.3, 0.4, 0.5, 0.6):
        current = {r.video_id for r in label_detections(dets, gt, tau) if r.positive}
        if previous is not None:
            assert current <= previous
        previous = current


# ── 표 / mAP ──


def test_per_action_table_and_map(gt):
    dets = [
        det("v1", "a", 0.9, GT_BOX),
        det("v2", "a", 0.5, [0, 0, 10, 10]),
        det("v2", "b", 0.8, [0, 0, 10, 3]),
        det("v3", "b", 0.3, GT_BOX),
    ]
    table = per_action_table(dets, gt, [0.2, 0.5])
    assert list(table.columns) == ["action", "tau", "n_gt", "ap", "auc"]
    assert len(table) == 4

    maps = map_over_thresholds(dets, gt, [0.2, 0.5])
    # a: 항상 1.0, b: IoU 0.3 이라 τ 0.2 에서만 1.0
    assert maps == {0.2: pytest.approx(1.0), 0.5: pytest.approx(0.5)}

    aucs = auc_over_thresholds(dets, gt, [0.2, 0.5])
    assert aucs[0.2] == pytest.approx(1.0)
    # τ 0.5 에서 b 는 양성이 없어 평균에서 빠진다
    assert aucs[0.5] == pytest.approx(1.0)


def test_actions_without_ground_truth_are_skipped(gt):
    dets = [det("v1", "a", 0.9, GT_BOX), det("v1", "c", 0.4, GT_BOX)]
    table = per_action_table(dets, gt, [0.5], actions=["a", "c"])
    assert table["action"].tolist() == ["a"]


def test_empty_detection_set_is_an_error(gt):
    with pytest.raises(EmptyInputError, match="빈 검출"):
        per_action_table([], gt, [0.5])


# ── 오류 진단 ──


def test_classify_examples(gt):
    assert classify(det("v1", "a", 1.0, [0, 0, 10, 6]), gt, 0.5) is ErrorType.CORRECT
    assert classify(det("v1", "a", 1.0, [0, 0, 10, 3]), gt, 0.5) is ErrorType.LOCALIZATION
    assert classify(det("v1", "a", 1.0, [0, 0, 10, 0.5]), gt, 0.5) is ErrorType.BACKGROUND_OWN
    assert classify(det("v2", "a", 1.0, [0, 0, 10, 5]), gt, 0.5) is ErrorType.CONFUSION
    assert classify(det("v3", "a", 1.0, GT_BOX), gt, 0.5) is ErrorType.BACKGROUND_OTHER
    assert classify(det("v2", "a", 1.0, [50, 50, 60, 60]), gt, 0.5) is ErrorType.BACKGROUND_OTHER


def test_diagnose_counts_top_r(gt):
    dets = [
        det("v3", "a", 0.95, GT_BOX),
        det("v1", "a", 0.9, GT_BOX),
        det("v2", "b", 0.8, GT_BOX),
        det("v3", "b", 0.1, GT_BOX),
    ]
    counts = diagnose(dets, gt, 0.5)
    # a 의 상위 1 개는 v3 (배경), b 의 상위 1 개는 v2 (정답)
    assert counts[ErrorType.BACKGROUND_OTHER] == 1
    assert counts[ErrorType.CORRECT] == 1
    assert sum(counts.values()) == 2


def test_diagnose_threshold_range(gt):
    with pytest.raises(ValueError):
        diagnose([det("v1", "a", 1.0, GT_BOX)], gt, 0.05)


def test_error_table_rows_sum_to_top_r(gt):
    dets = [det("v1", "a", 0.9, [0, 0, 10, 4]), det("v2", "b", 0.8, [0, 0, 10, 7])]
    table = error_table(dets, gt, [0.1, 0.5])
    assert list(table.columns) == ["tau", *(k.value for k in ErrorType)]
    counts = table.drop(columns="tau").sum(axis=1)
    assert counts.tolist() == [2, 2]
    assert table.loc[0, "correct"] == 2
    assert table.loc[1, "localization"] == 1
