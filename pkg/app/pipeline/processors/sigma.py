"""포인트 잡음 σ sweep."""

from typing import Any

from app.pipeline.perturb import perturb_points
from app.pipeline.processors.base import BaseExperiment, SweepContext
from app.pipeline.registry import Registry
from app.utils.random import derive_seed


class SigmaSweep(BaseExperiment):
    name = "sigma"
    description = "포인트 어노테이션 잡음 σ (px)"

    def rows(self, context: SweepContext) -> list[dict[str, Any]]:
        seed = context.config.seed
        rows = []
        for sigma in context.config.sigma_grid:
            noisy = [
                v.with_points(perturb_points(v.points, sigma, derive_seed(seed, "sigma", v.video_id), v.meta))
                if v.points is not None
                else v
                for v in context.train
            ]
            rows.append({"sigma": float(sigma), **self.evaluate(context, noisy, context.test)})
        return rows


Registry.register(SigmaSweep())
