# waveshape/experiments/runner.py
"""Experiments that drive both neuron models over shared datasets."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Literal, Optional

import numpy as np

from ..models import neuron
from ..models.baseline import (
    BaselineModel,
    evaluate_baseline,
    init_baseline,
    least_squares_oracle,
    train_lms,
)
from ..models.neuron import WaveShapeModel
from ..models.schemas import ErrorReport, GroupingConfig, LMSConfig
from ..utils.data import Dataset, permute_patterns, split_holdout

logger = logging.getLogger(__name__)

# permutation runs must agree to within this
WEIGHT_SPREAD_TOLERANCE = 1e-9

ModelKind = Literal["waveshape", "baseline"]


def train_baseline(dataset: Dataset, lms: LMSConfig) -> BaselineModel:
    """Seeded initialisation followed by LMS training."""
    model = init_baseline(dataset.arity, lms.seed, lms.init_scale)
    return train_lms(model, dataset, lms.learning_rate, lms.epochs, lms.batch)


@dataclass
class Comparison:
    waveshape: WaveShapeModel
    baseline: BaselineModel
    reports: Dict[str, ErrorReport] = field(default_factory=dict)
    details: Dict[str, object] = field(default_factory=dict)


def compare_models(
    dataset: Dataset,
    grouping: GroupingConfig,
    lms: LMSConfig,
    holdout: float,
    split_seed: int,
) -> Comparison:
    """
    Train both models on the training split and report errors side by side.

    Reports are keyed "<model>_<split>"; "waveshape_initial_<split>" holds the
    error of the raw group signals before adjustment and weighting.
    """
    train_set, holdout_set = split_holdout(dataset, holdout, split_seed)
    wave = neuron.train(train_set, grouping)
    base = train_baseline(train_set, lms)

    splits = {"train": train_set}
    if holdout_set is not None:
        splits["holdout"] = holdout_set

    comparison = Comparison(wave, base)
    for name, part in splits.items():
        comparison.reports[f"waveshape_{name}"] = neuron.evaluate(wave, part)
        comparison.reports[f"baseline_{name}"] = evaluate_baseline(base, part)
        comparison.reports[f"waveshape_initial_{name}"] = neuron.evaluate_initial(wave, part)

    *_, floor = least_squares_oracle(train_set)
    comparison.details = {
        "n_train": train_set.n_patterns,
        "n_holdout": 0 if holdout_set is None else holdout_set.n_patterns,
        "least_squares_train_mse": floor,
    }
    logger.info(
        "Compared on %d/%d patterns: waveshape mae %.6g, baseline mae %.6g",
        train_set.n_patterns,
        comparison.details["n_holdout"],
        comparison.reports["waveshape_train"].mae,
        comparison.reports["baseline_train"].mae,
    )
    return comparison


@dataclass
class PermutationResult:
    kind: ModelKind
    trials: int
    identical_groupings: bool
    weight_spread: Optional[float]
    groupings: List[List[List[int]]]

    @property
    def passed(self) -> bool:
        return (
            self.identical_groupings
            and self.weight_spread is not None
            and self.weight_spread < WEIGHT_SPREAD_TOLERANCE
        )


def _spread(rows: List[np.ndarray]) -> float:
    return float(np.max(np.ptp(np.vstack(rows), axis=0)))


def permutation_test(
    dataset: Dataset,
    trials: int,
    seed: int,
    kind: ModelKind = "waveshape",
    grouping: Optional[GroupingConfig] = None,
    lms: Optional[LMSConfig] = None,
) -> PermutationResult:
    """
    Train on `trials` seeded reorderings of the same patterns.

    Trial t shuffles with seed + t. The wave-shape model should produce the
    same groups and weights every time; the per-pattern baseline need not.
    """
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    grouping = grouping or GroupingConfig()
    lms = lms or LMSConfig()

    structures = []
    rows = []
    for trial in range(trials):
        shuffled = permute_patterns(dataset, seed + trial)
        if kind == "waveshape":
            model = neuron.train(shuffled, grouping)
            structures.append(model.structure)
            rows.append(np.array(model.weights))
        else:
            model = train_baseline(shuffled, lms)
            structures.append(tuple((i,) for i in range(dataset.arity)))
            rows.append(np.append(model.weights, model.bias))

    identical = all(s == structures[0] for s in structures)
    spread = _spread(rows) if identical else None
    distinct = sorted(set(structures))
    logger.info("%d %s trials: %d distinct groupings, spread %s", trials, kind, len(distinct), spread)
    return PermutationResult(
        kind=kind,
        trials=trials,
        identical_groupings=identical,
        weight_spread=spread,
        groupings=[[list(g) for g in s] for s in distinct],
    )
