"""Application configuration using Pydantic Settings."""

from functools import lru_cache

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="POINTLOC_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # -----------------------------------------
    # General
    # -----------------------------------------

    app_name: str = "pointloc"
    log_level: str = "INFO"
    seed: int = 7

    # -----------------------------------------
    # 학습 (proposal mining)
    # -----------------------------------------

    # max-margin 정규화 계수 (실험 전체에서 10 고정)
    lambda_reg: float = 10.0
    # mining ↔ 분류기 교대 반복 횟수
    mining_iterations: int = 5
    # re-localization 용 fold 수
    mining_folds: int = 3
    # 다른 액션 비디오 1개당 음성 샘플 수
    negatives_per_video: int = 100

    # 선형 SVM 솔버 (epoch 예산이 곧 종료 조건)
    svm_epochs: int = 40
    svm_batch_size: int = 64
    svm_min_steps: int = 500
    svm_step_size: float = 1.0

    # center match 항에서 박스 밖 포인트를 0 으로 클램프 (False 면 수식 그대로)
    center_match_containment: bool = True

    # -----------------------------------------
    # 추론 (pseudo-points)
    # -----------------------------------------

    lambda_t: float = 1.0

    # -----------------------------------------
    # 평가
    # -----------------------------------------

    tau_grid: list[float] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6]
    # 오류 진단의 내부 임계값 (localization / background 경계)
    diagnose_inner_threshold: float = 0.1

    # CSV 출력 float 포맷 (재실행 간 byte-identical 보장)
    csv_float_format: str = "%.6f"

    # -----------------------------------------
    # 어노테이션 비용 (stride 실험 speed-up 열)
    # -----------------------------------------

    label_seconds: float = 5.0
    box_seconds: float = 15.0
    point_seconds: float = 1.5


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


settings = get_settings()
