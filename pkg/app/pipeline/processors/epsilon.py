"""저품질 proposal 제거 비율 ε sweep.

학습과 테스트 비디오 모두에서 GT 와의 IoU ≤ 0.5 인 proposal 중 ε 비율을 지웁니다.
"""

from typing import Any

from app.pipeline.perturb import filter_low_quality
from app.pipeline.processors.base import BaseExperiment, SweepContext
from app.pipeline.registry import Registry
from app.utils.random import derive_seed


class EpsilonSweep(BaseExperiment):
    name = "epsilon"
    description = "저품질 proposal 제거 비율 ε"

    def rows(self, context: SweepContext) -> list[dict[str, Any]]:
        seed = derive_seed(context.config.seed, "epsilon")
        rows = []
        for epsilon in context.config.epsilon_grid:
            train = [filter_low_quality(v, epsilon, seed) for v in context.train]
            test = [filter_low_quality(v, epsilon, seed) for v in context.test]
            proposals = sum(len(v.proposals) for v in (*train, *test))
            rows.append(
                {
                    "epsilon": float(epsilon),
                    "proposals": proposals,
                    **self.evaluate(context, train, test),
                }
            )
        return rows


Registry.register(EpsilonSweep())
