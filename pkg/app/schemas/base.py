"""Base schemas and utilities."""

import math
from typing import Annotated

from pydantic import AfterValidator, BaseModel, ConfigDict


def _finite(value: float) -> float:
    if not math.isfinite(value):
        raise ValueError(f"유한한 실수여야 합니다: {value}")
    return value


def _box_order(values: list[float]) -> list[float]:
    xmin, ymin, xmax, ymax = values
    if not (xmin < xmax and ymin < ymax):
        raise ValueError(f"박스 좌표 순서가 잘못되었습니다: {values}")
    return values


# 유한 실수
Finite = Annotated[float, AfterValidator(_finite)]

# [xmin, ymin, xmax, ymax]
BoxList = Annotated[list[Finite], AfterValidator(_box_order)]


class BaseSchema(BaseModel):
    """Base schema with common configuration.

    파일 포맷 필드명은 그대로 snake_case 로 유지합니다.
    """

    model_config = ConfigDict(
        extra="forbid",
        frozen=True,
        populate_by_name=True,
    )
