# waveshape/models/baseline.py
"""
Classic weighted-sum unit trained with the delta rule (Widrow-Hoff LMS).

One weight per input plus a bias, identity activation. Weights start from a
seeded uniform draw; per-pattern mode updates after every pattern in
presentation order, batch mode applies the mean update once per epoch.
"""

import logging
from dataclasses import dataclass, replace
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import ArityError, DivergenceError
from ..utils.data import Dataset, make_rng
from .neuron import error_report
from .schemas import BaselineDocument, ErrorReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class BaselineModel:
    weights: np.ndarray
    bias: float
    seed: int
    mse_history: Tuple[float, ...] = ()

    def __post_init__(self):
        weights = np.array(self.weights, dtype=np.float64).reshape(-1)
        if weights.size < 1:
            raise ArityError("baseline needs at least one weight")
        if not (np.all(np.isfinite(weights)) and np.isfinite(self.bias)):
            raise DivergenceError()
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "bias", float(self.bias))

    @property
    def arity(self) -> int:
        return int(self.weights.size)


def init_baseline(arity: int, seed: int, scale: float = 0.5) -> BaselineModel:
    """Weights uniform in [-scale, scale] from a PCG64 stream seeded with seed; bias 0."""
    if arity < 1:
        raise ArityError(f"arity must be at least 1, got {arity}")
    if not scale > 0:
        raise ValueError(f"scale must be positive, got {scale}")
    weights = make_rng(seed).uniform(-scale, scale, size=arity)
    return BaselineModel(weights, 0.0, seed)


def _check_arity(model: BaselineModel, arity: int) -> None:
    if arity != model.arity:
        raise ArityError(f"model expects {model.arity} inputs, got {arity}")


def train_lms(
    model: BaselineModel,
    dataset: Dataset,
    learning_rate: float,
    epochs: int,
    batch: bool = False,
) -> BaselineModel:
    """
    Delta-rule training.

    Args:
        model: Starting weights (left untouched)
        dataset: Training patterns; per-pattern mode follows their order
        learning_rate: Step size, > 0
        epochs: Passes over the dataset, >= 1
        batch: Apply one averaged update per epoch instead of one per pattern

    Returns:
        New model whose mse_history holds the MSE after every epoch
    """
    if not learning_rate > 0:
        raise ValueError(f"learning rate must be positive, got {learning_rate}")
    if epochs < 1:
        raise ValueError(f"epochs must be at least 1, got {epochs}")
    _check_arity(model, dataset.arity)

    inputs, targets = dataset.inputs, dataset.targets
    weights = model.weights.copy()
    bias = model.bias
    history = []
    with np.errstate(over="ignore", invalid="ignore"):
        for epoch in range(epochs):
            if batch:
                errors = targets - (inputs @ weights + bias)
                weights = weights + learning_rate * (inputs.T @ errors) / dataset.n_patterns
                bias = bias + learning_rate * float(errors.mean())
            else:
                for x, target in zip(inputs, targets):
                    error = target - (float(x @ weights) + bias)
                    weights = weights + learning_rate * error * x
                    bias = bias + learning_rate * error
            mse = float(np.mean((targets - (inputs @ weights + bias)) ** 2))
            if not (np.all(np.isfinite(weights)) and np.isfinite(bias) and np.isfinite(mse)):
                logger.error("LMS diverged at epoch %d (learning rate %g)", epoch + 1, learning_rate)
                raise DivergenceError()
            history.append(mse)
            logger.debug("epoch %d mse %.6g", epoch + 1, mse)
    return replace(model, weights=weights, bias=bias, mse_history=tuple(history))


def lms_gradient(model: BaselineModel, dataset: Dataset) -> Tuple[np.ndarray, float]:
    """Gradient of the dataset MSE with respect to (weights, bias)."""
    _check_arity(model, dataset.arity)
    residual = dataset.inputs @ model.weights + model.bias - dataset.targets
    grad_weights = 2.0 * (dataset.inputs.T @ residual) / dataset.n_patterns
    return grad_weights, 2.0 * float(residual.mean())


def least_squares_oracle(dataset: Dataset) -> Tuple[np.ndarray, float, float]:
    """Closed-form affine fit: (weights, bias, training MSE)."""
    design = np.column_stack([dataset.inputs, np.ones(dataset.n_patterns)])
    solution, *_ = np.linalg.lstsq(design, dataset.targets, rcond=None)
    residual = design @ solution - dataset.targets
    return solution[:-1], float(solution[-1]), float(np.mean(residual ** 2))


def predict_many_baseline(model: BaselineModel, inputs: Any) -> np.ndarray:
    matrix = np.asarray(inputs, dtype=np.float64)
    if matrix.ndim == 1:
        matrix = matrix.reshape(1, -1)
    _check_arity(model, matrix.shape[1])
    return matrix @ model.weights + model.bias


def predict_baseline(model: BaselineModel, inputs: Sequence[float]) -> float:
    return float(predict_many_baseline(model, np.asarray(inputs, dtype=np.float64))[0])


def evaluate_baseline(model: BaselineModel, dataset: Dataset) -> ErrorReport:
    _check_arity(model, dataset.arity)
    return error_report(predict_many_baseline(model, dataset.inputs), dataset.targets)


def describe_baseline(model: BaselineModel, input_names: Optional[Sequence[str]] = None) -> Dict[str, Any]:
    names = list(input_names) if input_names else [f"x{i + 1}" for i in range(model.arity)]
    return {
        "kind": "baseline",
        "inputs": names,
        "weights": [float(w) for w in model.weights],
        "bias": model.bias,
        "seed": model.seed,
        "epochs_run": len(model.mse_history),
        "final_mse": model.mse_history[-1] if model.mse_history else None,
    }


def to_document(model: BaselineModel) -> BaselineDocument:
    return BaselineDocument(
        arity=model.arity,
        weights=[float(w) for w in model.weights],
        bias=model.bias,
        seed=model.seed,
    )


def from_document(document: BaselineDocument) -> BaselineModel:
    return BaselineModel(np.array(document.weights), document.bias, document.seed)
