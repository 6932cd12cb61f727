"""감독 방식 비교: point prior, 비디오 라벨, box, best-proposal."""

from typing import Any

from app.models.enums import Prior
from app.pipeline.processors.base import BaseExperiment, SweepContext
from app.pipeline.registry import Registry


class PriorSweep(BaseExperiment):
    name = "prior"
    description = "감독 방식 비교 (point / video-label / box / best-proposal)"

    def rows(self, context: SweepContext) -> list[dict[str, Any]]:
        return [
            {"prior": prior.value, **self.evaluate(context, context.train, context.test, prior=prior)}
            for prior in Prior
        ]


Registry.register(PriorSweep())
