"""재현 가능한 난수 스트림.

모든 난수는 Philox4x64-10 (카운터 기반) 생성기에서 뽑습니다.
키는 [seed mod 2^64, CRC32(스트림 라벨)] 두 워드이고 카운터는 0 에서 시작하므로,
같은 (seed, 라벨) 은 언어와 무관하게 같은 스트림을 재생합니다.
정규분포는 Box–Muller 변환으로 생성하며, 쌍 (z0, z1) 을 순서대로 이어 붙입니다.
"""

from __future__ import annotations

import zlib

import numpy as np
from numpy.typing import NDArray

_MASK64 = (1 << 64) - 1


def stream_key(*labels: object) -> int:
    """스트림 라벨들을 '/' 로 이은 문자열의 CRC32."""
    text = "/".join(str(label) for label in labels)
    return zlib.crc32(text.encode("utf-8"))


def stream(seed: int, *labels: object) -> np.random.Generator:
    """(seed, 라벨) 로 결정되는 독립 난수 생성기."""
    key = np.array([int(seed) & _MASK64, stream_key(*labels)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def gaussian(
    rng: np.random.Generator,
    size: int | tuple[int, ...],
    sigma: float = 1.0,
) -> NDArray[np.float64]:
    """Box–Muller 로 N(0, σ²) 표본을 생성합니다."""
    shape = (size,) if isinstance(size, int) else tuple(size)
    n = int(np.prod(shape))
    if n == 0:
        return np.zeros(shape, dtype=np.float64)

    pairs = (n + 1) // 2
    u1 = 1.0 - rng.random(pairs)  # (0, 1]
    u2 = rng.random(pairs)
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    z = np.empty(2 * pairs, dtype=np.float64)
    z[0::2] = radius * np.cos(angle)
    z[1::2] = radius * np.sin(angle)
    return (sigma * z[:n]).reshape(shape)


def derive_seed(seed: int, *labels: object) -> int:
    """부모 seed 와 라벨로 하위 작업(예: fold 별 SVM) 의 64비트 seed 를 만듭니다."""
    return (int(seed) * 1_000_003 + stream_key(*labels)) & _MASK64
