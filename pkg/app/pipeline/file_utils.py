"""파일 유틸리티 모듈.

바이너리 포맷 (모두 little-endian):
    특징      "PSAL0001" | u32 proposal 수 | u32 차원 | 수 × 차원 f32 (행 우선, proposal 순서)
    mass map  "PSALMASS" | u32 프레임 수 | u32 격자 폭 | u32 격자 높이 | u32 다운샘플 | 프레임 우선 f32 격자
    모델      "PSALMODL" | u32 차원 | 차원 × f32 가중치 | f32 bias

JSON 파일은 pydantic 스키마로 검증하고, 모든 쓰기는 같은 디렉토리의 임시 파일을 거쳐 원자적으로 교체합니다.
"""

from __future__ import annotations

import os
import struct
import tempfile
from pathlib import Path
from typing import TypeVar

import numpy as np
import pandas as pd
from numpy.typing import NDArray
from pydantic import BaseModel, ValidationError

from app.config import settings
from app.core.exceptions import DatasetError
from app.models.linear import LinearModel
from app.models.video import MassMap

FEATURES_MAGIC = b"PSAL0001"
MASS_MAGIC = b"PSALMASS"
MODEL_MAGIC = b"PSALMODL"

_F32 = np.dtype("<f4")

SchemaT = TypeVar("SchemaT", bound=BaseModel)


def write_atomic(path: Path, data: bytes) -> None:
    """임시 파일에 쓴 뒤 os.replace 로 교체합니다."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _read_bytes(path: Path) -> bytes:
    try:
        return path.read_bytes()
    except FileNotFoundError as e:
        raise DatasetError(f"파일이 없습니다: {path}") from e


def _check_magic(data: bytes, magic: bytes, header: int, path: Path) -> None:
    if len(data) < header or data[: len(magic)] != magic:
        raise DatasetError(f"{path}: 매직 바이트가 {magic.decode()} 가 아닙니다")


# ── JSON ──


def read_json(path: Path, schema: type[SchemaT]) -> SchemaT:
    """JSON 파일을 스키마로 검증해 읽습니다."""
    try:
        return schema.model_validate_json(_read_bytes(path))
    except ValidationError as e:
        raise DatasetError(f"{path}: 스키마 위반\n{e}") from e


def write_json(path: Path, record: BaseModel) -> None:
    write_atomic(path, (record.model_dump_json(indent=2) + "\n").encode("utf-8"))


# ── 특징 ──


def write_features(path: Path, features: NDArray[np.floating]) -> None:
    matrix = np.asarray(features, dtype=_F32)
    if matrix.ndim != 2:
        raise ValueError(f"특징은 2차원 행렬이어야 합니다: {matrix.shape}")
    header = FEATURES_MAGIC + struct.pack("<II", *matrix.shape)
    write_atomic(path, header + np.ascontiguousarray(matrix).tobytes())


def read_features(path: Path) -> NDArray[np.float32]:
    """저장된 f32 특징 그대로 (정규화 전)."""
    data = _read_bytes(path)
    _check_magic(data, FEATURES_MAGIC, 16, path)
    count, dim = struct.unpack_from("<II", data, 8)
    expected = 16 + count * dim * 4
    if len(data) != expected:
        raise DatasetError(f"{path}: 크기 {len(data)} 가 헤더가 말하는 {expected} 와 다릅니다")
    return np.frombuffer(data, dtype=_F32, offset=16).reshape(count, dim).astype(np.float32)


def l2_normalize(features: NDArray[np.floating]) -> NDArray[np.float64]:
    """행 단위 L2 정규화 (영벡터는 그대로)."""
    matrix = np.asarray(features, dtype=np.float64)
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    return np.divide(matrix, norms, out=np.zeros_like(matrix), where=norms > 0)


# ── mass map ──


def write_mass_map(path: Path, mass_map: MassMap) -> None:
    grids = np.asarray(mass_map.grids, dtype=_F32)
    header = MASS_MAGIC + struct.pack(
        "<IIII", mass_map.frame_count, mass_map.grid_width, mass_map.grid_height, mass_map.downsample
    )
    write_atomic(path, header + np.ascontiguousarray(grids).tobytes())


def read_mass_map(path: Path) -> MassMap:
    data = _read_bytes(path)
    _check_magic(data, MASS_MAGIC, 24, path)
    frames, width, height, downsample = struct.unpack_from("<IIII", data, 8)
    expected = 24 + frames * width * height * 4
    if len(data) != expected:
        raise DatasetError(f"{path}: 크기 {len(data)} 가 헤더가 말하는 {expected} 와 다릅니다")
    grids = np.frombuffer(data, dtype=_F32, offset=24).reshape(frames, height, width)
    try:
        return MassMap(grids=grids, downsample=downsample)
    except ValueError as e:
        raise DatasetError(f"{path}: {e}") from e


# ── 모델 ──


def write_model(path: Path, model: LinearModel) -> None:
    payload = np.append(np.asarray(model.weights, dtype=_F32), _F32.type(model.bias))
    write_atomic(path, MODEL_MAGIC + struct.pack("<I", model.dim) + payload.astype(_F32).tobytes())


def read_model(path: Path) -> LinearModel:
    data = _read_bytes(path)
    _check_magic(data, MODEL_MAGIC, 12, path)
    (dim,) = struct.unpack_from("<I", data, 8)
    expected = 12 + (dim + 1) * 4
    if len(data) != expected:
        raise DatasetError(f"{path}: 크기 {len(data)} 가 헤더가 말하는 {expected} 와 다릅니다")
    values = np.frombuffer(data, dtype=_F32, offset=12).astype(np.float64)
    return LinearModel(weights=values[:dim], bias=float(values[dim]))


def quantize_model(model: LinearModel) -> LinearModel:
    """파일에 저장되는 f32 정밀도로 맞춘 모델."""
    return LinearModel(
        weights=np.asarray(model.weights, dtype=_F32).astype(np.float64),
        bias=float(_F32.type(model.bias)),
    )


# ── CSV ──


def write_csv(path: Path, table: pd.DataFrame) -> None:
    """고정 float 포맷의 CSV (재실행 간 byte-identical)."""
    text = table.to_csv(index=False, float_format=settings.csv_float_format, lineterminator="\n")
    write_atomic(path, text.encode("utf-8"))
