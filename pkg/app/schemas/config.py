"""실행 설정 스키마 (학습, 합성 데이터, CLI 실행)."""

from pathlib import Path
from typing import Annotated

from pydantic import Field, model_validator

from app.config import settings
from app.models.enums import Prior
from app.schemas.base import BaseSchema, Finite


class MiningConfig(BaseSchema):
    """proposal mining 설정.

    prior_weight 는 기본적으로 1 (point prior) 또는 0 (video-label 기준선) 이지만
    실험용으로 임의의 실수를 허용합니다.
    """

    lambda_reg: float = Field(default_factory=lambda: settings.lambda_reg, gt=0)
    iterations: int = Field(default_factory=lambda: settings.mining_iterations, ge=1)
    folds: int = Field(default_factory=lambda: settings.mining_folds, ge=2)
    negatives_per_video: int = Field(default_factory=lambda: settings.negatives_per_video, ge=1)
    prior_weight: Finite = 1.0
    seed: int = Field(default_factory=lambda: settings.seed)
    epochs: int = Field(default_factory=lambda: settings.svm_epochs, ge=1)
    batch_size: int = Field(default_factory=lambda: settings.svm_batch_size, ge=1)


class SynthConfig(BaseSchema):
    """합성 데이터셋 생성 설정.

    jitter_fraction: GT 를 흔든 proposal 비율, 나머지는 배경 튜브.
    context_strength: 큰 배경 튜브에 섞이는 액션별 장면(context) 성분의 세기.
    feature_noise_shared: 특징 잡음 분산 중 비디오 안의 proposal 들이 함께 받는 비율.
    """

    seed: int = Field(default_factory=lambda: settings.seed)
    n_actions: Annotated[int, Field(ge=1)] = 3
    train_per_action: Annotated[int, Field(ge=1)] = 20
    test_per_action: Annotated[int, Field(ge=1)] = 20
    frames_per_video: Annotated[int, Field(ge=2)] = 60
    width: Annotated[int, Field(gt=0)] = 320
    height: Annotated[int, Field(gt=0)] = 240
    proposals_per_video: Annotated[int, Field(ge=1)] = 64
    jitter_fraction: Annotated[float, Field(ge=0.0, le=1.0)] = 0.15
    feature_dim: Annotated[int, Field(ge=2)] = 32
    feature_noise: Annotated[float, Field(ge=0.0)] = 0.1
    feature_noise_shared: Annotated[float, Field(ge=0.0, le=1.0)] = 0.9
    context_strength: Annotated[float, Field(ge=0.0)] = 0.8
    point_stride: Annotated[int, Field(ge=1)] = 1
    point_noise: Annotated[float, Field(ge=0.0)] = 0.0
    epsilon: Annotated[float, Field(ge=0.0, le=1.0)] = 0.0
    include_oracle: bool = False
    off_center: bool = False
    include_detections: bool = True
    person_noise: Annotated[float, Field(ge=0.0)] = 3.0
    person_distractors: Annotated[int, Field(ge=0)] = 2
    include_mass_maps: bool = True
    mass_downsample: Annotated[int, Field(ge=1)] = 16


class RunConfig(BaseSchema):
    """CLI 서브커맨드 한 번의 실행 설정."""

    subcommand: str
    dataset: Path | None = None
    out: Path | None = None
    seed: int = Field(default_factory=lambda: settings.seed)
    mining: MiningConfig = Field(default_factory=MiningConfig)
    prior: Prior = Prior.POINT
    pseudo: list[str] = Field(default_factory=lambda: ["none"])
    lambda_t: Annotated[float, Field(ge=0.0)] | None = None
    tau_grid: list[float] = Field(default_factory=lambda: list(settings.tau_grid))
    stride_grid: list[int] = Field(default_factory=lambda: [1, 2, 5, 10, 20])
    sigma_grid: list[float] = Field(default_factory=lambda: [0.0, 1.0, 5.0, 10.0, 50.0])
    epsilon_grid: list[float] = Field(default_factory=lambda: [0.0, 0.5, 0.9, 1.0])

    @model_validator(mode="after")
    def _grids(self) -> "RunConfig":
        for name in ("tau_grid", "stride_grid", "sigma_grid", "epsilon_grid", "pseudo"):
            if not getattr(self, name):
                raise ValueError(f"{name} 가 비어 있습니다")
        if any(not 0.0 < t <= 1.0 for t in self.tau_grid):
            raise ValueError(f"τ 는 (0, 1] 범위여야 합니다: {self.tau_grid}")
        if any(s < 1 for s in self.stride_grid):
            raise ValueError(f"stride 는 1 이상이어야 합니다: {self.stride_grid}")
        if any(s < 0 for s in self.sigma_grid):
            raise ValueError(f"σ 는 0 이상이어야 합니다: {self.sigma_grid}")
        if any(not 0.0 <= e <= 1.0 for e in self.epsilon_grid):
            raise ValueError(f"ε 는 [0, 1] 범위여야 합니다: {self.epsilon_grid}")
        return self
