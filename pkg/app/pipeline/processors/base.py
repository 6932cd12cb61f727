"""실험(sweep) 프로세서 베이스 클래스."""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import pandas as pd

from app.models.enums import Split
from app.models.video import Video
from app.pipeline.file_utils import write_csv
from app.pipeline.runner import run_once, versioned
from app.schemas.config import RunConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepContext:
    """sweep 한 번이 공유하는 데이터셋과 실행 설정."""

    actions: tuple[str, ...]
    videos: tuple[Video, ...]
    config: RunConfig

    @property
    def train(self) -> list[Video]:
        return [v for v in self.videos if v.split is Split.TRAIN]

    @property
    def test(self) -> list[Video]:
        return [v for v in self.videos if v.split is Split.TEST]


@dataclass
class ExperimentResult:
    """실험 결과 표와 저장 경로."""

    name: str
    table: pd.DataFrame = field(default_factory=pd.DataFrame)
    path: Path | None = None

    def summary(self) -> str:
        parts = [f"{self.name}: {len(self.table)}행"]
        if self.path is not None:
            parts.append(f"저장: {self.path}")
        return " | ".join(parts)


def map_column(tau: float) -> str:
    return f"map@{tau:g}"


def map_columns(maps: dict[float, float], taus: Sequence[float]) -> dict[str, float]:
    return {map_column(t): maps[float(t)] for t in taus}


class BaseExperiment(ABC):
    """sweep 실험 베이스 클래스.

    grid 의 값마다 데이터셋을 변형해 학습 → 추론 → 평가를 한 번씩 돌리고,
    값 하나당 한 행(τ 별 mAP 열)을 모아 CSV 로 씁니다.
    """

    name: str  # 예: "stride"
    description: str  # 예: "어노테이션 stride"

    @abstractmethod
    def rows(self, context: SweepContext) -> list[dict[str, Any]]:
        """표의 행들을 계산합니다."""
        ...

    def evaluate(
        self,
        context: SweepContext,
        train: Sequence[Video],
        test: Sequence[Video],
        **kwargs: Any,
    ) -> dict[str, float]:
        """변형된 학습/테스트 비디오로 한 칸을 돌려 map@τ 열을 만듭니다.

        kwargs 로 넘기지 않은 prior, pseudo, lambda_t 는 실행 설정의 값을 씁니다.
        """
        cfg = context.config
        maps = run_once(
            context.actions,
            train,
            test,
            prior=kwargs.pop("prior", cfg.prior),
            mining=cfg.mining,
            taus=cfg.tau_grid,
            pseudo=kwargs.pop("pseudo", cfg.pseudo),
            lambda_t=kwargs.pop("lambda_t", cfg.lambda_t),
            **kwargs,
        )
        return map_columns(maps, cfg.tau_grid)

    def output_path(self, context: SweepContext) -> Path | None:
        out = context.config.out
        return None if out is None else out / f"sweep_{self.name}.csv"

    def run(self, context: SweepContext) -> ExperimentResult:
        logger.info("sweep 시작: %s", self.name)
        table = versioned(pd.DataFrame(self.rows(context)))
        path = self.output_path(context)
        if path is not None:
            write_csv(path, table)
        return ExperimentResult(name=self.name, table=table, path=path)
