"""결정적 선형 max-margin 솔버.

목적 함수 (클래스 균형 hinge):
    ½‖w‖² + λ · Σ_i c_i · max(0, 1 − y_i (w·x_i + b)),  c_i = n / (2 · n_{y_i})

미니배치 확률적 subgradient 하강으로 풉니다. 각 배치는 양성/음성에서 같은 수를 뽑고,
스텝 크기는 η_t = η₀ / (1 + t / T₀) 로 고정된 스케줄을 따릅니다.
수렴 판정 없이 epoch 예산만큼 돌며, 같은 입력과 seed 는 비트 단위로 같은 모델을 만듭니다.
"""

from __future__ import annotations

import logging
import math

import numpy as np
from numpy.typing import ArrayLike, NDArray

from app.config import settings
from app.core.exceptions import DimensionMismatchError, EmptyInputError
from app.models.linear import LinearModel
from app.utils.random import stream

logger = logging.getLogger(__name__)


def _as_matrix(rows: ArrayLike, name: str) -> NDArray[np.float64]:
    matrix = np.asarray(rows, dtype=np.float64)
    if matrix.ndim == 1:
        matrix = matrix.reshape(1, -1) if matrix.size else matrix.reshape(0, 0)
    if matrix.ndim != 2 or matrix.shape[0] == 0:
        raise EmptyInputError(f"{name} 집합이 비어 있습니다")
    if not np.all(np.isfinite(matrix)):
        raise ValueError(f"{name} 특징에 유한하지 않은 값이 있습니다")
    return matrix


def train_linear_svm(
    positives: ArrayLike,
    negatives: ArrayLike,
    lambda_reg: float,
    seed: int,
    *,
    epochs: int | None = None,
    batch_size: int | None = None,
) -> LinearModel:
    """양성/음성 특징 행렬로 선형 SVM 을 학습합니다.

    Args:
        positives: (p, D) 양성 특징
        negatives: (q, D) 음성 특징
        lambda_reg: hinge 항 가중치 λ (> 0)
        seed: 배치 샘플링 seed

    Raises:
        EmptyInputError: 한쪽 클래스가 비어 있을 때
        DimensionMismatchError: 두 집합의 차원이 다를 때
    """
    if lambda_reg <= 0:
        raise ValueError(f"lambda_reg 는 양수여야 합니다: {lambda_reg}")
    pos = _as_matrix(positives, "양성")
    neg = _as_matrix(negatives, "음성")
    if pos.shape[1] != neg.shape[1]:
        raise DimensionMismatchError(
            f"양성 차원 {pos.shape[1]} 과 음성 차원 {neg.shape[1]} 이 다릅니다"
        )

    epochs = epochs or settings.svm_epochs
    batch_size = batch_size or settings.svm_batch_size
    n_pos, n_neg = pos.shape[0], neg.shape[0]
    n = n_pos + n_neg
    half = max(1, batch_size // 2)
    steps = max(settings.svm_min_steps, epochs * math.ceil(n / (2 * half)))
    decay = max(1, steps // 10)
    reg = 1.0 / (lambda_reg * n)
    eta0 = settings.svm_step_size

    rng = stream(seed, "svm")
    w = np.zeros(pos.shape[1], dtype=np.float64)
    b = 0.0
    for t in range(steps):
        eta = eta0 / (1.0 + t / decay)
        xp = pos[rng.integers(0, n_pos, size=half)]
        xn = neg[rng.integers(0, n_neg, size=half)]
        vp = ((xp @ w + b) < 1.0).astype(np.float64)
        vn = ((xn @ w + b) > -1.0).astype(np.float64)

        grad_w = reg * w - (vp @ xp - vn @ xn) / (2 * half)
        grad_b = -(vp.sum() - vn.sum()) / (2 * half)
        w -= eta * grad_w
        b -= eta * grad_b

    logger.debug("SVM 학습: 양성 %d, 음성 %d, 스텝 %d", n_pos, n_neg, steps)
    return LinearModel(weights=w, bias=b)


def hinge_objective(
    model: LinearModel,
    positives: ArrayLike,
    negatives: ArrayLike,
    lambda_reg: float,
) -> float:
    """솔버가 최소화하는 클래스 균형 hinge 목적 함수 값."""
    pos = _as_matrix(positives, "양성")
    neg = _as_matrix(negatives, "음성")
    n = pos.shape[0] + neg.shape[0]
    hinge_pos = np.maximum(0.0, 1.0 - model.decision(pos)).sum() * n / (2 * pos.shape[0])
    hinge_neg = np.maximum(0.0, 1.0 + model.decision(neg)).sum() * n / (2 * neg.shape[0])
    return 0.5 * float(model.weights @ model.weights) + lambda_reg * float(hinge_pos + hinge_neg)
