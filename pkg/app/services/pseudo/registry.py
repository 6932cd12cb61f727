"""pseudo-point 생성기 레지스트리."""

from __future__ import annotations

from collections.abc import Callable, Sequence

from app.models.enums import PSEUDO_KIND_ORDER, PseudoKind
from app.models.video import Video
from app.services.pseudo import center, motion, person, self_supervision, train_stats
from app.services.pseudo.base import PseudoContext, PseudoTrack

Generator = Callable[[Video, PseudoContext], PseudoTrack]

GENERATORS: dict[PseudoKind, Generator] = {
    PseudoKind.TRAIN_STATS: train_stats.generate,
    PseudoKind.SELF_SUPERVISION: self_supervision.generate,
    PseudoKind.PERSON: person.generate,
    PseudoKind.INDEPENDENT_MOTION: motion.generate,
    PseudoKind.CENTER: center.generate,
}


def pseudo_track_for(
    kind: PseudoKind, video: Video, context: PseudoContext | None = None
) -> PseudoTrack:
    """kind 생성기로 비디오 전 프레임 pseudo-track 을 만듭니다."""
    return GENERATORS[kind](video, context or PseudoContext())


def available_kinds(videos: Sequence[Video], context: PseudoContext) -> list[PseudoKind]:
    """모든 비디오에서 입력이 준비된 종류 (선택 우선순위 순)."""
    kinds: list[PseudoKind] = []
    for kind in PSEUDO_KIND_ORDER:
        if kind is PseudoKind.PERSON and not any(v.detections for v in videos):
            continue
        if kind is PseudoKind.INDEPENDENT_MOTION and not all(v.mass_map is not None for v in videos):
            continue
        if kind is PseudoKind.TRAIN_STATS and not context.train_means:
            continue
        kinds.append(kind)
    return kinds
