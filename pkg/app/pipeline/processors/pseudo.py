"""pseudo-point ablation.

한 번 학습한 모델로, pseudo-point 종류마다 (시간 prior 없이 / 함께) 추론해
pseudo-point 를 쓰지 않은 결과 대비 mAP 차이를 기록합니다.
"""

from typing import Any

from app.config import settings
from app.models.enums import PSEUDO_ALIASES
from app.pipeline.loader import ground_truth_of
from app.pipeline.processors.base import BaseExperiment, SweepContext, map_columns
from app.pipeline.registry import Registry
from app.pipeline.runner import (
    InferencePlan,
    evaluate,
    infer,
    map_at,
    plan_inference,
    train_models,
)
from app.services.pseudo import available_kinds

_ALIAS_OF = {kind: alias for alias, kind in PSEUDO_ALIASES.items()}


class PseudoAblation(BaseExperiment):
    name = "pseudo"
    description = "pseudo-point 종류별 ablation (시간 prior 유무)"

    def rows(self, context: SweepContext) -> list[dict[str, Any]]:
        cfg = context.config
        actions, train, test = context.actions, context.train, context.test
        lambda_t = settings.lambda_t if cfg.lambda_t is None else cfg.lambda_t
        models = train_models(actions, train, cfg.prior, cfg.mining)
        gt = ground_truth_of(test)

        base = plan_inference(actions, train)
        options = ["none", *(_ALIAS_OF[k] for k in available_kinds(train, base.context)), "auto"]

        def score(plan: InferencePlan) -> dict[float, float]:
            _, summary = evaluate(infer(actions, test, models, plan), gt, cfg.tau_grid, actions)
            return map_at(summary)

        baseline = score(base)
        rows = []
        for option in options:
            for temporal in (False, True):
                plan = plan_inference(actions, train, [option], lambda_t if temporal else None)
                maps = baseline if option == "none" and not temporal else score(plan)
                rows.append(
                    {
                        "pseudo": option,
                        "selected": "+".join(w.kind.value for w in plan.weights) or "none",
                        "lambda_p": plan.weights[0].lambda_p if plan.weights else 0.0,
                        "temporal": temporal,
                        **map_columns(maps, cfg.tau_grid),
                        **{
                            f"delta@{t:g}": maps[float(t)] - baseline[float(t)]
                            for t in cfg.tau_grid
                        },
                    }
                )
        return rows


Registry.register(PseudoAblation())
