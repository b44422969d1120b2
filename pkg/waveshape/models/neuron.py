# waveshape/models/neuron.py
"""
The wave-shape neuron.

Each synapse group's combined signal is moved to the output's level and then
scaled by one weight: the ratio of the output's shape-change average to the
group's, signed by whether the two shapes rise and fall together. Group
estimates are averaged into the neuron's output.

Prediction does not call transpose_to_level on the incoming batch: each
synapse shifts by the signal mean stored at training time, so a single
pattern is placed on the same level as the training data.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import ArityError, DivergenceError, GroupingError, InsufficientPatternsError
from ..utils.data import Dataset, canonicalize
from ..utils.shape import shape_change_average, shape_distance, shape_of
from .grouping import SynapseGroup, combined_signal, search
from .schemas import (
    CombineMode,
    ErrorReport,
    GroupingConfig,
    SynapseDocument,
    WaveShapeDocument,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FittedSynapse:
    """A synapse group with its single weight and training signal mean."""

    group: SynapseGroup
    weight: float
    signal_mean: float
    degenerate: bool = False
    unscaled: bool = False

    def estimate(self, signal: np.ndarray, output_mean: float) -> np.ndarray:
        """Transpose the signal to the output level, then scale it."""
        if self.degenerate:
            return np.full(np.shape(signal), output_mean, dtype=np.float64)
        return self.weight * (signal - self.signal_mean) + output_mean


@dataclass(frozen=True)
class WaveShapeModel:
    synapses: Tuple[FittedSynapse, ...]
    output_mean: float
    arity: int
    config: GroupingConfig = field(default_factory=GroupingConfig)
    dropped: Tuple[int, ...] = ()

    def __post_init__(self):
        if not self.synapses:
            raise GroupingError("a model needs at least one synapse")
        used = [i for s in self.synapses for i in s.group.input_indices]
        if len(used) != len(set(used)):
            raise GroupingError("synapse groups must be pairwise disjoint")
        if used and max(used) >= self.arity:
            raise ArityError(f"synapse index {max(used)} exceeds arity {self.arity}")

    @property
    def combine_mode(self) -> CombineMode:
        return self.config.combine_mode

    @property
    def weights(self) -> Tuple[float, ...]:
        return tuple(s.weight for s in self.synapses)

    @property
    def structure(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(s.group.input_indices for s in self.synapses)


def _fallback_to_unscaled(
    signal: np.ndarray, targets: np.ndarray, weight: float, signal_mean: float
) -> bool:
    output_mean = float(targets.mean())
    sign = 1.0 if weight >= 0 else -1.0
    scaled = weight * (signal - signal_mean) + output_mean
    unscaled = sign * (signal - signal_mean) + output_mean
    return float(np.mean((unscaled - targets) ** 2)) < float(np.mean((scaled - targets) ** 2))


def fit_group(
    group: SynapseGroup,
    dataset: Dataset,
    mode: CombineMode = "sum",
    keep_unscaled_if_better: bool = False,
) -> FittedSynapse:
    """
    Fit one group's weight in a single pass.

    Args:
        group: Inputs feeding the synapse
        dataset: Training patterns, in any order
        mode: How the group's inputs are combined
        keep_unscaled_if_better: Use weight +-1 when scaling does not lower
            the training error

    Returns:
        FittedSynapse; degenerate with weight 1 when the group signal is flat
    """
    if dataset.n_patterns < 2:
        raise InsufficientPatternsError(
            f"fitting needs at least 2 patterns, got {dataset.n_patterns}"
        )
    ordered = canonicalize(dataset)
    signal = combined_signal(group, ordered, mode)
    targets = ordered.targets
    signal_mean = float(signal.mean())

    signal_change = shape_change_average(signal)
    if signal_change == 0:
        return FittedSynapse(group, 1.0, signal_mean, degenerate=True)

    magnitude = shape_change_average(targets) / signal_change
    if not (math.isfinite(signal_change) and math.isfinite(magnitude)):
        raise DivergenceError(
            f"weight of group {group.input_indices} is not finite; rescale the data"
        )
    sign = -1.0 if float(np.dot(shape_of(signal), shape_of(targets))) < 0 else 1.0
    weight = sign * magnitude

    if keep_unscaled_if_better and _fallback_to_unscaled(signal, targets, weight, signal_mean):
        return FittedSynapse(group, sign, signal_mean, unscaled=True)
    return FittedSynapse(group, weight, signal_mean)


def train(dataset: Dataset, config: Optional[GroupingConfig] = None) -> WaveShapeModel:
    """
    Group the inputs, then fit every group.

    No randomness is involved: the same patterns in any order give the same
    model.
    """
    config = config or GroupingConfig()
    if dataset.n_patterns < 2:
        raise InsufficientPatternsError(
            f"training needs at least 2 patterns, got {dataset.n_patterns}"
        )
    partition = search(dataset, config)
    synapses = tuple(
        fit_group(group, dataset, config.combine_mode, config.keep_unscaled_if_better)
        for group in partition.groups
    )
    model = WaveShapeModel(
        synapses=synapses,
        output_mean=float(canonicalize(dataset).targets.mean()),
        arity=dataset.arity,
        config=config,
        dropped=partition.dropped,
    )
    logger.info("Trained groups %s with weights %s", model.structure, model.weights)
    return model


def _as_matrix(inputs: Any, arity: int) -> np.ndarray:
    matrix = np.asarray(inputs, dtype=np.float64)
    if matrix.ndim == 1:
        matrix = matrix.reshape(1, -1)
    if matrix.ndim != 2 or matrix.shape[1] != arity:
        raise ArityError(f"expected {arity} inputs per pattern, got shape {matrix.shape}")
    return matrix


def _group_signals(model: WaveShapeModel, matrix: np.ndarray) -> np.ndarray:
    """Combined signal per synapse, shape (n_patterns, n_synapses)."""
    columns = []
    for synapse in model.synapses:
        block = matrix[:, list(synapse.group.input_indices)]
        columns.append(block.mean(axis=1) if model.combine_mode == "mean" else block.sum(axis=1))
    return np.column_stack(columns)


def synapse_estimates(model: WaveShapeModel, inputs: Any) -> np.ndarray:
    """Adjusted and weighted estimate of every synapse, shape (n_patterns, n_synapses)."""
    signals = _group_signals(model, _as_matrix(inputs, model.arity))
    return np.column_stack([
        synapse.estimate(signals[:, i], model.output_mean)
        for i, synapse in enumerate(model.synapses)
    ])


def predict_many(model: WaveShapeModel, inputs: Any) -> np.ndarray:
    return synapse_estimates(model, inputs).mean(axis=1)


def predict(model: WaveShapeModel, inputs: Sequence[float]) -> float:
    """Neuron output for one input vector."""
    values = np.asarray(inputs, dtype=np.float64)
    if values.ndim != 1:
        raise ArityError("predict takes a single input vector")
    return float(predict_many(model, values)[0])


def initial_estimates(model: WaveShapeModel, inputs: Any) -> np.ndarray:
    """Raw combined signals averaged over synapses, before any adjustment or weighting."""
    return _group_signals(model, _as_matrix(inputs, model.arity)).mean(axis=1)


def error_report(predictions: np.ndarray, targets: np.ndarray) -> ErrorReport:
    errors = np.asarray(predictions, dtype=np.float64) - np.asarray(targets, dtype=np.float64)
    shape_error = (
        shape_distance(shape_of(predictions), shape_of(targets)) if errors.size >= 2 else 0.0
    )
    return ErrorReport(
        per_pattern_error=[float(e) for e in errors],
        mae=float(np.mean(np.abs(errors))),
        mse=float(np.mean(errors ** 2)),
        shape_error=shape_error,
    )


def evaluate(model: WaveShapeModel, dataset: Dataset) -> ErrorReport:
    """Value errors (prediction minus target) over a dataset, in its order."""
    if dataset.arity != model.arity:
        raise ArityError(f"model expects {model.arity} inputs, dataset has {dataset.arity}")
    return error_report(predict_many(model, dataset.inputs), dataset.targets)


def evaluate_initial(model: WaveShapeModel, dataset: Dataset) -> ErrorReport:
    if dataset.arity != model.arity:
        raise ArityError(f"model expects {model.arity} inputs, dataset has {dataset.arity}")
    return error_report(initial_estimates(model, dataset.inputs), dataset.targets)


def describe(model: WaveShapeModel, input_names: Optional[Sequence[str]] = None) -> Dict[str, Any]:
    """Readable summary for reports."""
    names = list(input_names) if input_names else [f"x{i + 1}" for i in range(model.arity)]
    return {
        "kind": "waveshape",
        "groups": [[names[i] for i in s.group.input_indices] for s in model.synapses],
        "indices": [list(s.group.input_indices) for s in model.synapses],
        "weights": [s.weight for s in model.synapses],
        "signal_means": [s.signal_mean for s in model.synapses],
        "degenerate": [s.degenerate for s in model.synapses],
        "unscaled": [s.unscaled for s in model.synapses],
        "output_mean": model.output_mean,
        "dropped": [names[i] for i in model.dropped],
    }


def to_document(model: WaveShapeModel) -> WaveShapeDocument:
    return WaveShapeDocument(
        arity=model.arity,
        combine_mode=model.combine_mode,
        output_mean=model.output_mean,
        synapses=[
            SynapseDocument(
                indices=list(s.group.input_indices),
                weight=s.weight,
                signal_mean=s.signal_mean,
                degenerate=s.degenerate,
                unscaled=s.unscaled,
            )
            for s in model.synapses
        ],
    )


def from_document(document: WaveShapeDocument) -> WaveShapeModel:
    synapses = tuple(
        FittedSynapse(
            group=SynapseGroup(tuple(s.indices)),
            weight=s.weight,
            signal_mean=s.signal_mean,
            degenerate=s.degenerate,
            unscaled=s.unscaled,
        )
        for s in document.synapses
    )
    used = {i for s in synapses for i in s.group.input_indices}
    return WaveShapeModel(
        synapses=synapses,
        output_mean=document.output_mean,
        arity=document.arity,
        config=GroupingConfig(combine_mode=document.combine_mode),
        dropped=tuple(i for i in range(document.arity) if i not in used),
    )
