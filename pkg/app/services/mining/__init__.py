"""point 감독 MIL 학습과 감독 기준선."""

from app.services.mining.baselines import (
    best_proposal_indices,
    best_proposal_train,
    box_supervised_train,
    train_for_prior,
)
from app.services.mining.mil import (
    MiningResult,
    mil_train,
    mine_best_proposal,
    mining_score,
    mining_scores,
    run_mining,
)
from app.services.mining.svm import hinge_objective, train_linear_svm

__all__ = [
    "MiningResult",
    "best_proposal_indices",
    "best_proposal_train",
    "box_supervised_train",
    "hinge_objective",
    "mil_train",
    "mine_best_proposal",
    "mining_score",
    "mining_scores",
    "run_mining",
    "train_for_prior",
    "train_linear_svm",
]
