"""평가 입력: top-1 검출과 GT 인덱스."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from app.core.exceptions import DatasetError
from app.models.geometry import Tube


@dataclass(frozen=True, eq=False)
class Detection:
    """(비디오, 액션, 점수, 튜브) 검출 한 건."""

    video_id: str
    action: str
    score: float
    tube: Tube
    proposal_index: int = -1


class GroundTruth:
    """비디오 → 액션 → GT 튜브 목록.

    평가 대상 비디오 전체를 알고 있어야 하므로, GT 가 없는 비디오도 빈 매핑으로 등록합니다.
    """

    def __init__(self, tubes: Mapping[str, Mapping[str, Iterable[Tube]]]) -> None:
        self._tubes: dict[str, dict[str, tuple[Tube, ...]]] = {
            vid: {action: tuple(ts) for action, ts in per_action.items()}
            for vid, per_action in tubes.items()
        }

    @property
    def video_ids(self) -> list[str]:
        return sorted(self._tubes)

    def __contains__(self, video_id: object) -> bool:
        return video_id in self._tubes

    def instances(self, video_id: str, action: str) -> tuple[Tube, ...]:
        if video_id not in self._tubes:
            raise DatasetError(f"GT 에 없는 비디오 id: {video_id}")
        return self._tubes[video_id].get(action, ())

    def actions_of(self, video_id: str) -> list[str]:
        if video_id not in self._tubes:
            raise DatasetError(f"GT 에 없는 비디오 id: {video_id}")
        return sorted(a for a, ts in self._tubes[video_id].items() if ts)

    def count(self, action: str) -> int:
        """액션의 GT 인스턴스 수 (n_gt)."""
        return sum(len(per_action.get(action, ())) for per_action in self._tubes.values())

    def other_instances(self, video_id: str, action: str) -> tuple[Tube, ...]:
        """같은 비디오의 다른 액션 GT 튜브."""
        if video_id not in self._tubes:
            raise DatasetError(f"GT 에 없는 비디오 id: {video_id}")
        return tuple(
            tube
            for other, ts in sorted(self._tubes[video_id].items())
            if other != action
            for tube in ts
        )
