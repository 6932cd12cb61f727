"""프레임 중심 pseudo-point."""

from app.models.enums import PseudoKind
from app.models.geometry import VideoMeta
from app.models.video import Video
from app.services.pseudo.base import PseudoContext, PseudoTrack, frame_center_fill


def pp_center(meta: VideoMeta) -> tuple[float, float]:
    return meta.center


def generate(video: Video, context: PseudoContext) -> PseudoTrack:
    return PseudoTrack(kind=PseudoKind.CENTER, payload=frame_center_fill(video.meta))
