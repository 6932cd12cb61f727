"""CLI 서브커맨드 종단 간 테스트 (synth → train → infer → eval / diagnose / sweep)."""

import json

import pandas as pd
import pytest

from app.pipeline.cli import build_parser, main, run
from app.pipeline.registry import auto_discover

SYNTH_ARGS = [
    "--n-actions", "2",
    "--train-per-action", "4",
    "--test-per-action", "3",
    "--frames", "12",
    "--width", "96",
    "--height", "64",
    "--proposals", "16",
    "--feature-dim", "8",
]
FAST_ARGS = ["--iterations", "2", "--folds", "2"]


@pytest.fixture(scope="module")
def dataset(tmp_path_factory):
    root = tmp_path_factory.mktemp("synth")
    assert run(["synth", "--out", str(root), "--seed", "7", *SYNTH_ARGS]) == 0
    return root


def pipeline(dataset, out):
    common = ["--dataset", str(dataset), "--out", str(out), "--seed", "7"]
    assert run(["train", *common, *FAST_ARGS]) == 0
    assert run(["infer", *common]) == 0
    assert run(["eval", *common, "--tau-grid", "0.2,0.5"]) == 0


def test_full_pipeline_writes_outputs(dataset, tmp_path):
    pipeline(dataset, tmp_path)
    assert sorted(p.name for p in (tmp_path / "models").iterdir()) == ["action1.bin", "action2.bin"]
    detections = pd.read_csv(tmp_path / "detections.csv")
    assert len(detections) == 2 * 6
    metrics = pd.read_csv(tmp_path / "metrics.csv")
    assert metrics.columns.tolist() == ["schema_version", "tau", "map", "mean_auc"]
    assert metrics["tau"].tolist() == [0.2, 0.5]
    per_action = pd.read_csv(tmp_path / "metrics_per_action.csv")
    assert set(per_action["action"]) == {"action1", "action2"}


def test_pipeline_is_byte_identical(dataset, tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"
    pipeline(dataset, first)
    pipeline(dataset, second)
    for name in ["models/action1.bin", "models/action2.bin", "detections.csv", "detections.json", "metrics.csv"]:
        assert (first / name).read_bytes() == (second / name).read_bytes(), name


def test_infer_reads_models_from_other_directory(dataset, tmp_path):
    models = tmp_path / "train"
    common = ["--dataset", str(dataset), "--seed", "7"]
    assert run(["train", *common, "--out", str(models), *FAST_ARGS]) == 0
    out = tmp_path / "infer"
    assert run(["infer", *common, "--out", str(out), "--models", str(models), "--pseudo", "self", "--lambda-t", "1"]) == 0
    assert (out / "detections.json").exists()


def test_diagnose_counts_sum_to_top_r(dataset, tmp_path):
    pipeline(dataset, tmp_path)
    assert run(["diagnose", "--dataset", str(dataset), "--out", str(tmp_path), "--tau-grid", "0.1,0.5"]) == 0
    table = pd.read_csv(tmp_path / "diagnosis.csv")
    counts = table.drop(columns=["schema_version", "tau"]).sum(axis=1)
    # 액션마다 R = 테스트 GT 3 개
    assert counts.tolist() == [6, 6]


def test_pseudo_weight_writes_one_selected_row(dataset, tmp_path):
    assert run(["pseudo-weight", "--dataset", str(dataset), "--out", str(tmp_path), "--pseudo", "auto"]) == 0
    table = pd.read_csv(tmp_path / "pseudo_weights.csv")
    assert table["selected"].sum() == 1
    assert table["lambda_p"].between(0.0, 1.0).all()
    assert set(table["kind"]) == {"train_stats", "self_supervision", "person", "independent_motion", "center"}


def test_sweep_stride_is_reproducible(dataset, tmp_path):
    args = ["--dataset", str(dataset), "--seed", "7", *FAST_ARGS, "--stride-grid", "1,5", "--tau-grid", "0.2"]
    assert run(["sweep", "stride", "--out", str(tmp_path / "a"), *args]) == 0
    assert run(["sweep", "stride", "--out", str(tmp_path / "b"), *args]) == 0
    first = (tmp_path / "a" / "sweep_stride.csv").read_bytes()
    assert first == (tmp_path / "b" / "sweep_stride.csv").read_bytes()
    table = pd.read_csv(tmp_path / "a" / "sweep_stride.csv")
    assert table.columns.tolist() == ["schema_version", "stride", "points", "speedup", "map@0.2"]
    assert table["stride"].tolist() == [1, 5]


# ── 오류 ──


def test_eval_of_empty_detection_set_fails(dataset, tmp_path, capsys):
    (tmp_path / "detections.json").write_text(json.dumps({"detections": []}))
    status = run(["eval", "--dataset", str(dataset), "--out", str(tmp_path)])
    assert status == 1
    err = capsys.readouterr().err
    assert "error:" in err and "빈 검출" in err


def test_missing_dataset_fails(tmp_path, capsys):
    status = run(["train", "--dataset", str(tmp_path / "nope"), "--out", str(tmp_path / "out")])
    assert status == 1
    assert "데이터셋이 없습니다" in capsys.readouterr().err


def test_out_must_differ_from_dataset(dataset):
    assert run(["train", "--dataset", str(dataset), "--out", str(dataset)]) == 1


def test_bad_grid_value_fails(dataset, tmp_path):
    assert run(["eval", "--dataset", str(dataset), "--out", str(tmp_path), "--tau-grid", "0,0.5"]) == 1


def test_diagnose_tau_below_inner_threshold_fails(dataset, tmp_path, capsys):
    pipeline(dataset, tmp_path)
    status = run(["diagnose", "--dataset", str(dataset), "--out", str(tmp_path), "--tau-grid", "0.05,0.5"])
    assert status == 1
    err = capsys.readouterr().err
    assert "error:" in err and "0.05" in err
    assert not (tmp_path / "diagnosis.csv").exists()


def test_unknown_pseudo_kind_fails(dataset, tmp_path, capsys):
    assert run(["pseudo-weight", "--dataset", str(dataset), "--out", str(tmp_path), "--pseudo", "bogus"]) == 1
    assert "bogus" in capsys.readouterr().err


def test_usage_errors_exit_with_two():
    with pytest.raises(SystemExit) as exc:
        main(["train", "--out", "x"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["nope"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["eval", "--dataset", "d", "--out", "o", "--tau-grid", "a,b"])
    assert exc.value.code == 2


def test_parser_lists_registered_sweeps():
    auto_discover()
    sweep = build_parser().parse_args(["sweep", "all", "--dataset", "d", "--out", "o"])
    assert sweep.experiment == "all"
    assert sweep.pseudo == ["none"]
    assert sweep.stride_grid == [1, 2, 5, 10, 20]
