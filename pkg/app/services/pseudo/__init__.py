"""추론용 pseudo-point: 생성, 가중치, 선택, 재점수화."""

from app.services.pseudo.base import PseudoContext, PseudoTrack, PseudoWeight
from app.services.pseudo.center import pp_center
from app.services.pseudo.motion import pp_independent_motion
from app.services.pseudo.person import pp_person
from app.services.pseudo.registry import GENERATORS, available_kinds, pseudo_track_for
from app.services.pseudo.rescoring import (
    TemporalStats,
    adjusted_scores,
    rescore_select,
    rescore_select_many,
    select_top1,
    temporal_rescore,
    temporal_stats,
)
from app.services.pseudo.self_supervision import pp_self_supervision
from app.services.pseudo.train_stats import pp_train_stats, train_means
from app.services.pseudo.weighting import select_pseudo, weight_on_videos, weight_pseudo

__all__ = [
    "GENERATORS",
    "PseudoContext",
    "PseudoTrack",
    "PseudoWeight",
    "TemporalStats",
    "adjusted_scores",
    "available_kinds",
    "pp_center",
    "pp_independent_motion",
    "pp_person",
    "pp_self_supervision",
    "pp_train_stats",
    "pseudo_track_for",
    "rescore_select",
    "rescore_select_many",
    "select_pseudo",
    "select_top1",
    "temporal_rescore",
    "temporal_stats",
    "train_means",
    "weight_on_videos",
    "weight_pseudo",
]
