"""학습 → 추론 → 평가 실행기.

CLI 서브커맨드와 sweep 프로세서가 공유하는 단계별 함수들입니다.
모든 단계는 입력 데이터셋 디렉토리를 건드리지 않고 out 아래에만 씁니다.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from app.core.exceptions import ConfigError, DatasetError, DimensionMismatchError, EmptyInputError
from app.models.detection import Detection, GroundTruth
from app.models.enums import PSEUDO_ALIASES, Prior, PseudoKind
from app.models.geometry import Tube
from app.models.linear import LinearModel
from app.models.video import Video
from app.pipeline.file_utils import (
    quantize_model,
    read_json,
    read_model,
    write_csv,
    write_json,
    write_model,
)
from app.pipeline.loader import ground_truth_of
from app.schemas.config import MiningConfig
from app.schemas.dataset import InferenceFile, InferredDetectionRecord, TubeRecord
from app.services.evaluation import error_table, per_action_table, summary_table
from app.services.mining import train_for_prior
from app.services.pseudo import (
    PseudoContext,
    PseudoWeight,
    TemporalStats,
    available_kinds,
    pseudo_track_for,
    select_pseudo,
    select_top1,
    temporal_stats,
    train_means,
    weight_on_videos,
)

logger = logging.getLogger(__name__)

MODELS_DIR = "models"
DETECTIONS_CSV = "detections.csv"
DETECTIONS_JSON = "detections.json"
DETECTION_COLUMNS = ["video_id", "action", "score", "start_frame", "end_frame", "proposal_index"]

# CSV 헤더 버전 (열 구성이 바뀌면 올린다)
SCHEMA_VERSION = 1


@dataclass(frozen=True)
class InferencePlan:
    """추론 시 적용할 pseudo-point 가중치와 시간 prior."""

    weights: tuple[PseudoWeight, ...] = ()
    temporal: Mapping[str, TemporalStats] | None = None
    context: PseudoContext = field(default_factory=PseudoContext)

    @property
    def label(self) -> str:
        names = [w.kind.value for w in self.weights] or ["none"]
        if self.temporal is not None:
            names.append("temporal")
        return "+".join(names)


# ── 학습 ──


def train_models(
    actions: Sequence[str],
    videos: Sequence[Video],
    prior: Prior,
    config: MiningConfig,
) -> dict[str, LinearModel]:
    """액션별 분류기를 학습합니다. 모델은 저장 정밀도(f32)로 맞춰 돌려줍니다."""
    if not videos:
        raise EmptyInputError("학습 비디오가 없습니다")
    models: dict[str, LinearModel] = {}
    for action in actions:
        logger.info("%s: %s 감독으로 학습", action, prior.value)
        models[action] = quantize_model(train_for_prior(prior, action, videos, config))
    return models


def model_path(out: Path, action: str) -> Path:
    return out / MODELS_DIR / f"{action}.bin"


def save_models(out: Path, models: Mapping[str, LinearModel]) -> list[Path]:
    paths = []
    for action, model in sorted(models.items()):
        path = model_path(out, action)
        write_model(path, model)
        paths.append(path)
    return paths


def load_models(directory: Path, actions: Sequence[str], feature_dim: int) -> dict[str, LinearModel]:
    """out/models/<action>.bin 을 읽습니다. directory 는 out 또는 models 디렉토리."""
    folder = directory if directory.name == MODELS_DIR else directory / MODELS_DIR
    models = {action: read_model(folder / f"{action}.bin") for action in actions}
    for action, model in models.items():
        if model.dim != feature_dim:
            raise DimensionMismatchError(
                f"{action}: 모델 차원 {model.dim} 이 특징 차원 {feature_dim} 과 다릅니다"
            )
    return models


# ── pseudo-point 계획 ──


def parse_pseudo(names: Sequence[str]) -> list[PseudoKind] | None:
    """--pseudo 값들을 종류 목록으로. "auto" 면 None."""
    lowered = [n.strip().lower() for n in names if n.strip()]
    if "auto" in lowered:
        if len(lowered) > 1:
            raise ConfigError("--pseudo auto 는 다른 종류와 함께 쓸 수 없습니다")
        return None
    kinds: list[PseudoKind] = []
    for name in lowered:
        if name == "none":
            continue
        if name not in PSEUDO_ALIASES:
            raise ConfigError(f"알 수 없는 pseudo-point 종류: {name}")
        if PSEUDO_ALIASES[name] not in kinds:
            kinds.append(PSEUDO_ALIASES[name])
    return kinds


def pseudo_context(actions: Sequence[str], train: Sequence[Video]) -> PseudoContext:
    annotated = [v for v in train if v.points is not None and len(v.points)]
    return PseudoContext(train_means=train_means(annotated, actions) if annotated else {})


def estimate_weights(
    kinds: Sequence[PseudoKind] | None, train: Sequence[Video], context: PseudoContext
) -> list[PseudoWeight]:
    """학습 비디오로 λ_P 를 추정합니다. kinds 가 None 이면 가용 종류 중 최댓값 하나."""
    if kinds is None:
        candidates = available_kinds(train, context)
        weights = [weight_on_videos(kind, train, context) for kind in candidates]
        chosen = select_pseudo(weights)
        logger.info("auto 선택: %s (λ_P = %.4f)", chosen.kind.value, chosen.lambda_p)
        return [chosen]
    return [weight_on_videos(kind, train, context) for kind in kinds]


def plan_inference(
    actions: Sequence[str],
    train: Sequence[Video],
    pseudo: Sequence[str] = ("none",),
    lambda_t: float | None = None,
) -> InferencePlan:
    """학습 비디오에서 pseudo-point 가중치와 (λ_T 가 주어지면) 시간 통계를 구합니다."""
    kinds = parse_pseudo(pseudo)
    context = pseudo_context(actions, train)
    weights = tuple(estimate_weights(kinds, train, context)) if kinds != [] else ()
    temporal = None
    if lambda_t is not None:
        temporal = {action: temporal_stats(action, train, lambda_t) for action in actions}
    return InferencePlan(weights=weights, temporal=temporal, context=context)


# ── 추론 ──


def infer(
    actions: Sequence[str],
    videos: Sequence[Video],
    models: Mapping[str, LinearModel],
    plan: InferencePlan | None = None,
) -> list[Detection]:
    """액션마다 테스트 비디오별 top-1 proposal 을 검출로 냅니다."""
    plan = plan or InferencePlan()
    detections: list[Detection] = []
    for video in sorted(videos, key=lambda v: v.video_id):
        tracks = {
            w.kind: pseudo_track_for(w.kind, video, plan.context)
            for w in plan.weights
            if w.kind is not PseudoKind.TRAIN_STATS
        }
        for action in actions:
            pairs = []
            for w in plan.weights:
                track = tracks.get(w.kind)
                if track is None:
                    context = PseudoContext(action=action, train_means=plan.context.train_means)
                    track = pseudo_track_for(w.kind, video, context)
                pairs.append((track, w.lambda_p))
            temporal = plan.temporal[action] if plan.temporal is not None else None
            index, score = select_top1(models[action], video, pairs, temporal)
            detections.append(
                Detection(
                    video_id=video.video_id,
                    action=action,
                    score=score,
                    tube=video.proposals[index],
                    proposal_index=index,
                )
            )
    logger.info("추론 완료: 검출 %d 건 (%s)", len(detections), plan.label)
    return detections


def detections_frame(detections: Sequence[Detection]) -> pd.DataFrame:
    rows = [
        {
            "video_id": d.video_id,
            "action": d.action,
            "score": d.score,
            "start_frame": d.tube.start_frame,
            "end_frame": d.tube.end_frame,
            "proposal_index": d.proposal_index,
        }
        for d in detections
    ]
    return versioned(pd.DataFrame(rows, columns=DETECTION_COLUMNS))


def save_detections(out: Path, detections: Sequence[Detection]) -> tuple[Path, Path]:
    """detections.csv (요약) 와 detections.json (튜브 포함) 을 씁니다."""
    csv_path = out / DETECTIONS_CSV
    json_path = out / DETECTIONS_JSON
    write_csv(csv_path, detections_frame(detections))
    write_json(
        json_path,
        InferenceFile(
            detections=[
                InferredDetectionRecord(
                    video_id=d.video_id,
                    action=d.action,
                    score=d.score,
                    proposal_index=max(d.proposal_index, 0),
                    tube=TubeRecord(start_frame=d.tube.start_frame, boxes=d.tube.boxes.tolist()),
                )
                for d in detections
            ]
        ),
    )
    return csv_path, json_path


def load_detections(path: Path) -> list[Detection]:
    """detections.json (또는 그것이 있는 디렉토리) 에서 검출을 읽습니다."""
    if path.is_dir():
        path = path / DETECTIONS_JSON
    record = read_json(path, InferenceFile)
    detections = []
    for d in record.detections:
        try:
            tube = Tube(start_frame=d.tube.start_frame, boxes=np.asarray(d.tube.boxes, dtype=np.float64))
        except ValueError as e:
            raise DatasetError(f"{path}: {d.video_id}/{d.action}: {e}") from e
        detections.append(
            Detection(
                video_id=d.video_id,
                action=d.action,
                score=d.score,
                tube=tube,
                proposal_index=d.proposal_index,
            )
        )
    return detections


# ── 평가 ──


def versioned(table: pd.DataFrame) -> pd.DataFrame:
    """맨 앞에 schema_version 열을 붙입니다."""
    out = table.copy()
    out.insert(0, "schema_version", SCHEMA_VERSION)
    return out


def check_detections(detections: Sequence[Detection], gt: GroundTruth) -> None:
    if not detections:
        raise EmptyInputError("평가할 검출이 없습니다 (빈 검출 집합)")
    unknown = sorted({d.video_id for d in detections if d.video_id not in gt})
    if unknown:
        raise DatasetError(f"GT 에 없는 비디오의 검출: {', '.join(unknown[:5])}")


def evaluate(
    detections: Sequence[Detection],
    gt: GroundTruth,
    taus: Sequence[float],
    actions: Sequence[str] | None = None,
) -> tuple[pd.DataFrame, pd.DataFrame]:
    """(액션별 AP/AUC 표, τ 별 mAP/평균 AUC 표)."""
    check_detections(detections, gt)
    table = per_action_table(detections, gt, taus, actions)
    return table, summary_table(table)


def save_evaluation(out: Path, table: pd.DataFrame, summary: pd.DataFrame) -> tuple[Path, Path]:
    per_action = out / "metrics_per_action.csv"
    overall = out / "metrics.csv"
    write_csv(per_action, versioned(table))
    write_csv(overall, versioned(summary))
    return per_action, overall


def diagnose_table(
    detections: Sequence[Detection], gt: GroundTruth, taus: Sequence[float]
) -> pd.DataFrame:
    check_detections(detections, gt)
    return error_table(detections, gt, taus)


def map_at(summary: pd.DataFrame) -> dict[float, float]:
    """τ → mAP."""
    return {float(t): float(m) for t, m in zip(summary["tau"], summary["map"], strict=True)}


def run_once(
    actions: Sequence[str],
    train: Sequence[Video],
    test: Sequence[Video],
    *,
    prior: Prior,
    mining: MiningConfig,
    taus: Sequence[float],
    pseudo: Sequence[str] = ("none",),
    lambda_t: float | None = None,
) -> dict[float, float]:
    """학습부터 평가까지 한 번에 돌려 τ → mAP 를 돌려줍니다 (sweep 한 칸)."""
    models = train_models(actions, train, prior, mining)
    plan = plan_inference(actions, train, pseudo, lambda_t)
    detections = infer(actions, test, models, plan)
    gt = ground_truth_of(test)
    _, summary = evaluate(detections, gt, taus, actions)
    return map_at(summary)
