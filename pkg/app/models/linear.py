"""max-margin 분류기 파라미터 (w, b)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from app.core.exceptions import DimensionMismatchError


@dataclass(frozen=True, eq=False)
class LinearModel:
    weights: NDArray[np.float64]
    bias: float

    def __post_init__(self) -> None:
        weights = np.array(self.weights, dtype=np.float64, copy=True).reshape(-1)
        if not np.all(np.isfinite(weights)) or not np.isfinite(self.bias):
            raise ValueError("모델 파라미터가 유한하지 않습니다")
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "bias", float(self.bias))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinearModel):
            return NotImplemented
        return self.bias == other.bias and np.array_equal(self.weights, other.weights)

    __hash__ = None  # type: ignore[assignment]

    @property
    def dim(self) -> int:
        return int(self.weights.shape[0])

    @classmethod
    def zeros(cls, dim: int) -> LinearModel:
        return cls(weights=np.zeros(dim), bias=0.0)

    def decision(self, features: NDArray[np.float64]) -> NDArray[np.float64]:
        """w·z + b (행 단위)."""
        features = np.asarray(features, dtype=np.float64)
        if features.shape[-1] != self.dim:
            raise DimensionMismatchError(
                f"특징 차원 {features.shape[-1]} 이 모델 차원 {self.dim} 과 다릅니다"
            )
        return features @ self.weights + self.bias
