"""도메인 Enum 정의."""

from enum import Enum


class Split(Enum):
    """데이터셋 분할."""

    TRAIN = "train"
    TEST = "test"


class PseudoKind(Enum):
    """추론 시 사용하는 pseudo-point 종류."""

    TRAIN_STATS = "train_stats"  # 학습 point 통계
    SELF_SUPERVISION = "self_supervision"  # proposal 밀도 중심
    PERSON = "person"  # 사람 검출 박스
    INDEPENDENT_MOTION = "independent_motion"  # 독립 모션 중심
    CENTER = "center"  # 프레임 중심

    @property
    def outputs_box(self) -> bool:
        return self is PseudoKind.PERSON


# 가중치 동점 시 선택 우선순위
PSEUDO_KIND_ORDER: tuple[PseudoKind, ...] = (
    PseudoKind.PERSON,
    PseudoKind.INDEPENDENT_MOTION,
    PseudoKind.CENTER,
    PseudoKind.SELF_SUPERVISION,
    PseudoKind.TRAIN_STATS,
)

# CLI --pseudo 축약어
PSEUDO_ALIASES: dict[str, PseudoKind] = {
    "train_stats": PseudoKind.TRAIN_STATS,
    "self": PseudoKind.SELF_SUPERVISION,
    "person": PseudoKind.PERSON,
    "imotion": PseudoKind.INDEPENDENT_MOTION,
    "center": PseudoKind.CENTER,
}


class Prior(Enum):
    """학습 감독 방식."""

    POINT = "point"  # point prior 를 포함한 MIL
    VIDEO_LABEL = "video-label"  # prior 없이 MIL (비디오 라벨만)
    BOX = "box"  # box-supervision 기준선
    BEST_PROPOSAL = "best-proposal"  # GT 와 가장 많이 겹치는 proposal 기준선


class ErrorType(Enum):
    """top-R 검출의 오류 유형."""

    CORRECT = "correct"
    LOCALIZATION = "localization"
    CONFUSION = "confusion"
    BACKGROUND_OWN = "background_own"
    BACKGROUND_OTHER = "background_other"
