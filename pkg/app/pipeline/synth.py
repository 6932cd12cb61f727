"""seed 로 완전히 결정되는 합성 데이터셋 생성기.

비디오마다
  - GT: 무작위 보행(random walk) 중심을 갖는 튜브 하나
  - proposal: GT 를 흔든 jitter 튜브 + 배경 튜브 (작은 튜브와 프레임 대부분을 덮는 장면 튜브)
  - 특징: tube_iou(proposal, GT) · 액션 prototype + 장면 세기 · 면적 비율 · 액션 context
          + 등방 잡음 σ_f (분산의 feature_noise_shared 몫은 비디오 단위로 공유), 이후 L2 정규화
  - 포인트 (학습 비디오): GT 박스 중심을 stride 간격으로, 잡음 σ 후 프레임 클램프
  - 사람 검출: 배우 박스(GT 를 시간축 양끝으로 연장) + 좌표 잡음, 낮은 신뢰도의 방해 검출
  - mass map: GT 박스 셀에 집중된 모션 mass, 액션 밖 프레임은 0

prototype 과 context 는 서로 직교하는 단위 벡터입니다 (차원이 부족하면 무작위 단위 벡터).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numpy.typing import NDArray

from app.core.exceptions import ConfigError
from app.models.enums import Split
from app.models.geometry import Box2D, PointTrack, Tube, VideoMeta
from app.models.video import DetectionBox, MassMap, Video
from app.pipeline.file_utils import l2_normalize
from app.pipeline.loader import mass_map_shape, save_dataset
from app.pipeline.perturb import filter_low_quality, perturb_points, subsample_points
from app.schemas.config import SynthConfig
from app.services.geometry.overlap import tube_iou
from app.utils.random import derive_seed, gaussian, stream

logger = logging.getLogger(__name__)

# 배경 proposal 중 장면 튜브 비율
SCENE_SHARE = 0.4
# jitter 세기 범위 (작을수록 GT 에 가까움)
JITTER_RANGE = (0.02, 0.35)
# GT 박스 크기 (프레임 대비)
GT_WIDTH_RANGE = (0.15, 0.3)
GT_HEIGHT_RANGE = (0.3, 0.55)
# 중심 보행 한 스텝의 표준편차 (px)
WALK_STEP = 1.5
# off-center 배치 시 GT 중심이 머무는 좌/우 띠 (프레임 폭 비율)
OFF_CENTER_BAND = 0.3


@dataclass(frozen=True)
class SynthWorld:
    """액션별 특징 prototype 과 장면 context."""

    actions: tuple[str, ...]
    prototypes: NDArray[np.float64]
    contexts: NDArray[np.float64]


def action_names(n_actions: int) -> tuple[str, ...]:
    return tuple(f"action{k + 1}" for k in range(n_actions))


def make_world(config: SynthConfig) -> SynthWorld:
    rng = stream(config.seed, "synth", "world")
    n, dim = config.n_actions, config.feature_dim
    raw = gaussian(rng, (dim, 2 * n))
    if dim >= 2 * n:
        basis, _ = np.linalg.qr(raw)
        vectors = basis.T
    else:
        vectors = l2_normalize(raw.T)
    return SynthWorld(
        actions=action_names(n),
        prototypes=np.asarray(vectors[:n], dtype=np.float64),
        contexts=np.asarray(vectors[n:], dtype=np.float64),
    )


def check_mixture(config: SynthConfig) -> tuple[int, int, int]:
    """(jitter 수, 장면 튜브 수, 작은 배경 튜브 수).

    Raises:
        ConfigError: oracle 과 jitter 가 proposal 수를 넘을 때
    """
    n = config.proposals_per_video
    n_oracle = 1 if config.include_oracle else 0
    n_jitter = round(config.jitter_fraction * n)
    n_background = n - n_oracle - n_jitter
    if n_background < 0:
        raise ConfigError(
            f"proposal {n} 개로는 oracle {n_oracle} 개와 jitter {n_jitter} 개를 담을 수 없습니다"
        )
    n_scene = round(SCENE_SHARE * n_background)
    return n_jitter, n_scene, n_background - n_scene


# ── 튜브 생성 ──


def _fit_boxes(
    cx: NDArray[np.float64],
    cy: NDArray[np.float64],
    w: NDArray[np.float64],
    h: NDArray[np.float64],
    meta: VideoMeta,
) -> NDArray[np.float64]:
    """크기를 유지한 채 프레임 안으로 옮긴 박스 (최소 2px)."""
    w = np.clip(w, 2.0, float(meta.width))
    h = np.clip(h, 2.0, float(meta.height))
    cx = np.clip(cx, w / 2.0, meta.width - w / 2.0)
    cy = np.clip(cy, h / 2.0, meta.height - h / 2.0)
    boxes = np.stack([cx - w / 2.0, cy - h / 2.0, cx + w / 2.0, cy + h / 2.0], axis=1)
    return np.round(boxes, 2)


def _span(rng: np.random.Generator, frames: int, low: int) -> tuple[int, int]:
    length = int(rng.integers(max(1, low), frames + 1))
    start = int(rng.integers(1, frames - length + 2))
    return start, length


def _walk(
    rng: np.random.Generator, length: int, start_xy: tuple[float, float]
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    steps = gaussian(rng, (length, 2), WALK_STEP)
    steps[0] = 0.0
    path = np.cumsum(steps, axis=0)
    return start_xy[0] + path[:, 0], start_xy[1] + path[:, 1]


def ground_truth_tube(rng: np.random.Generator, meta: VideoMeta, config: SynthConfig) -> Tube:
    start, length = _span(rng, meta.frame_count, meta.frame_count // 2)
    w = rng.uniform(*GT_WIDTH_RANGE) * meta.width
    h = rng.uniform(*GT_HEIGHT_RANGE) * meta.height
    cy0 = rng.uniform(h / 2.0, meta.height - h / 2.0)
    if config.off_center:
        band = OFF_CENTER_BAND * meta.width
        lo, hi = (w / 2.0, band) if rng.integers(2) == 0 else (meta.width - band, meta.width - w / 2.0)
        cx0 = rng.uniform(lo, hi)
    else:
        lo, hi = w / 2.0, meta.width - w / 2.0
        cx0 = rng.uniform(lo, hi)

    cx, cy = _walk(rng, length, (cx0, cy0))
    cx = np.clip(cx, lo, hi)
    boxes = _fit_boxes(cx, cy, np.full(length, w), np.full(length, h), meta)
    return Tube(start_frame=start, boxes=boxes)


def _extended_box(gt: Tube, frame: int) -> NDArray[np.float64]:
    """GT 범위 밖 프레임은 가장 가까운 끝 프레임의 박스."""
    return gt.boxes[int(np.clip(frame, gt.start_frame, gt.end_frame)) - gt.start_frame]


def jitter_tube(rng: np.random.Generator, gt: Tube, meta: VideoMeta) -> Tube:
    strength = rng.uniform(*JITTER_RANGE)
    length = len(gt)
    d_start, d_end = np.rint(gaussian(rng, 2, strength * length / 2.0)).astype(int)
    start = int(np.clip(gt.start_frame + d_start, 1, meta.frame_count))
    end = int(np.clip(gt.end_frame + d_end, start, meta.frame_count))

    ref = np.stack([_extended_box(gt, f) for f in range(start, end + 1)])
    width = ref[:, 2] - ref[:, 0]
    height = ref[:, 3] - ref[:, 1]
    dx, dy = gaussian(rng, 2, strength)
    sw, sh = np.exp(gaussian(rng, 2, strength))
    boxes = _fit_boxes(
        (ref[:, 0] + ref[:, 2]) / 2.0 + dx * width,
        (ref[:, 1] + ref[:, 3]) / 2.0 + dy * height,
        width * sw,
        height * sh,
        meta,
    )
    return Tube(start_frame=start, boxes=boxes)


def background_tube(rng: np.random.Generator, meta: VideoMeta) -> Tube:
    start, length = _span(rng, meta.frame_count, meta.frame_count // 4)
    w = rng.uniform(0.1, 0.35) * meta.width
    h = rng.uniform(0.2, 0.6) * meta.height
    cx, cy = _walk(
        rng,
        length,
        (rng.uniform(w / 2.0, meta.width - w / 2.0), rng.uniform(h / 2.0, meta.height - h / 2.0)),
    )
    return Tube(start_frame=start, boxes=_fit_boxes(cx, cy, np.full(length, w), np.full(length, h), meta))


def scene_tube(rng: np.random.Generator, meta: VideoMeta) -> Tube:
    start, length = _span(rng, meta.frame_count, int(0.7 * meta.frame_count))
    side = np.sqrt(rng.uniform(0.55, 1.0))
    w, h = side * meta.width, side * meta.height
    cx = rng.uniform(w / 2.0, meta.width - w / 2.0)
    cy = rng.uniform(h / 2.0, meta.height - h / 2.0)
    boxes = _fit_boxes(np.full(length, cx), np.full(length, cy), np.full(length, w), np.full(length, h), meta)
    return Tube(start_frame=start, boxes=boxes)


# ── 특징과 외부 단서 ──


def proposal_features(
    rng: np.random.Generator,
    proposals: list[Tube],
    gt: Tube,
    action_index: int,
    world: SynthWorld,
    meta: VideoMeta,
    config: SynthConfig,
) -> NDArray[np.float64]:
    # 잡음 분산 σ_f² 중 feature_noise_shared 만큼은 비디오의 모든 proposal 이 공유
    rho = config.feature_noise_shared
    shared = gaussian(rng, config.feature_dim, config.feature_noise * np.sqrt(rho)) if rho > 0 else 0.0
    own_sigma = config.feature_noise * float(np.sqrt(1.0 - rho))
    rows = []
    for tube in proposals:
        iou = tube_iou(tube, gt)
        area_fraction = float(np.mean(tube.areas)) / meta.frame_area
        rows.append(
            iou * world.prototypes[action_index]
            + config.context_strength * area_fraction * world.contexts[action_index]
            + shared
            + gaussian(rng, config.feature_dim, own_sigma)
        )
    return l2_normalize(np.stack(rows))


def annotate_points(gt: Tube, meta: VideoMeta, config: SynthConfig, video_id: str) -> PointTrack:
    track = PointTrack(frames=gt.frames, xy=gt.centers)
    track = subsample_points(track, config.point_stride)
    return perturb_points(track, config.point_noise, derive_seed(config.seed, "points", video_id), meta)


def person_detections(
    rng: np.random.Generator, gt: Tube, meta: VideoMeta, config: SynthConfig
) -> tuple[DetectionBox, ...]:
    records: list[DetectionBox] = []
    for frame in range(1, meta.frame_count + 1):
        box = _extended_box(gt, frame) + gaussian(rng, 4, config.person_noise)
        actor = _fit_boxes(
            np.array([(box[0] + box[2]) / 2.0]),
            np.array([(box[1] + box[3]) / 2.0]),
            np.array([box[2] - box[0]]),
            np.array([box[3] - box[1]]),
            meta,
        )[0]
        records.append(
            DetectionBox(frame, Box2D.from_list(actor.tolist()), round(float(rng.uniform(0.6, 1.0)), 4))
        )
        for _ in range(config.person_distractors):
            w = rng.uniform(0.1, 0.3) * meta.width
            h = rng.uniform(0.3, 0.6) * meta.height
            other = _fit_boxes(
                np.array([rng.uniform(0, meta.width)]),
                np.array([rng.uniform(0, meta.height)]),
                np.array([w]),
                np.array([h]),
                meta,
            )[0]
            records.append(
                DetectionBox(frame, Box2D.from_list(other.tolist()), round(float(rng.uniform(0.05, 0.65)), 4))
            )
    return tuple(records)


def motion_mass(
    rng: np.random.Generator, gt: Tube, meta: VideoMeta, config: SynthConfig
) -> MassMap:
    ds = config.mass_downsample
    grid_h, grid_w = mass_map_shape(meta, ds)
    grids = np.zeros((meta.frame_count, grid_h, grid_w), dtype=np.float64)
    cell_x = (np.arange(grid_w) + 0.5) * ds
    cell_y = (np.arange(grid_h) + 0.5) * ds
    for frame in gt.frames:
        xmin, ymin, xmax, ymax = gt.boxes[frame - gt.start_frame]
        inside = np.outer((cell_y >= ymin) & (cell_y <= ymax), (cell_x >= xmin) & (cell_x <= xmax))
        clutter = (rng.random((grid_h, grid_w)) < 0.02) * rng.uniform(0.0, 0.5, (grid_h, grid_w))
        grids[frame - 1] = inside * (1.0 + np.abs(gaussian(rng, (grid_h, grid_w), 0.1))) + clutter
    return MassMap(grids=grids.astype(np.float32), downsample=ds)


# ── 생성 ──


def synth_video(
    video_id: str,
    action_index: int,
    split: Split,
    world: SynthWorld,
    config: SynthConfig,
    mixture: tuple[int, int, int],
) -> Video:
    meta = VideoMeta(config.frames_per_video, config.width, config.height)
    rng = stream(config.seed, "synth", video_id)
    gt = ground_truth_tube(rng, meta, config)

    n_jitter, n_scene, n_small = mixture
    proposals = [gt] if config.include_oracle else []
    proposals += [jitter_tube(rng, gt, meta) for _ in range(n_jitter)]
    proposals += [scene_tube(rng, meta) for _ in range(n_scene)]
    proposals += [background_tube(rng, meta) for _ in range(n_small)]
    proposals = [proposals[int(i)] for i in rng.permutation(len(proposals))]

    features = proposal_features(rng, proposals, gt, action_index, world, meta, config)
    action = world.actions[action_index]
    video = Video(
        video_id=video_id,
        labels=(action,),
        split=split,
        meta=meta,
        proposals=tuple(proposals),
        features=features,
        points=annotate_points(gt, meta, config, video_id) if split is Split.TRAIN else None,
        ground_truth={action: (gt,)},
        detections=person_detections(rng, gt, meta, config) if config.include_detections else (),
        mass_map=motion_mass(rng, gt, meta, config) if config.include_mass_maps else None,
    )
    return filter_low_quality(video, config.epsilon, derive_seed(config.seed, "epsilon"))


def synth_videos(config: SynthConfig) -> tuple[tuple[str, ...], list[Video]]:
    """메모리 상의 합성 데이터셋 (액션 이름, id 순 비디오)."""
    mixture = check_mixture(config)
    world = make_world(config)
    videos: list[Video] = []
    for split, count in ((Split.TRAIN, config.train_per_action), (Split.TEST, config.test_per_action)):
        for a, action in enumerate(world.actions):
            for i in range(count):
                video_id = f"{split.value}_{action}_{i:03d}"
                videos.append(synth_video(video_id, a, split, world, config, mixture))
    videos.sort(key=lambda v: v.video_id)
    return world.actions, videos


def synth_generate(config: SynthConfig, out: Path) -> Path:
    """합성 데이터셋을 out 에 저장하고 매니페스트 경로를 돌려줍니다."""
    actions, videos = synth_videos(config)
    path = save_dataset(out, actions, videos)
    logger.info("합성 데이터셋 생성: %s (비디오 %d)", path, len(videos))
    return path
