# waveshape/models/schemas.py
"""Validated configuration, report and document models."""

import math
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

CombineMode = Literal["sum", "mean"]
SearchStrategy = Literal["auto", "exhaustive", "greedy"]

DOCUMENT_VERSION = 1


class GroupingConfig(BaseModel):
    """Settings for the synapse-group search."""

    model_config = ConfigDict(frozen=True)

    combine_mode: CombineMode = "sum"
    max_exhaustive_inputs: int = Field(10, ge=1)
    # None means 0.01 * (output shape change average + 1)
    group_count_penalty: Optional[float] = Field(None, ge=0, allow_inf_nan=False)
    allow_drop: bool = False
    sign_aware: bool = True
    search: SearchStrategy = "auto"
    keep_unscaled_if_better: bool = False


class LMSConfig(BaseModel):
    """Settings for delta-rule training of the baseline unit."""

    model_config = ConfigDict(frozen=True)

    learning_rate: float = Field(0.05, gt=0, allow_inf_nan=False)
    epochs: int = Field(500, ge=1)
    batch: bool = False
    seed: int = 1
    init_scale: float = Field(0.5, gt=0, allow_inf_nan=False)


class SyntheticSpec(BaseModel):
    """Recipe for a seeded synthetic dataset."""

    model_config = ConfigDict(frozen=True)

    arity: int = Field(ge=1)
    n_patterns: int = Field(ge=2)
    generator: Literal["random_linear", "random_uniform"] = "random_linear"
    coefficient_range: Tuple[float, float] = (-1.0, 1.0)
    input_range: Tuple[float, float] = (-1.0, 1.0)
    noise_sd: float = Field(0.0, ge=0, allow_inf_nan=False)
    seed: int = 0

    @field_validator("coefficient_range", "input_range")
    @classmethod
    def _ordered_interval(cls, value: Tuple[float, float]) -> Tuple[float, float]:
        low, high = value
        if not (math.isfinite(low) and math.isfinite(high)) or low > high:
            raise ValueError(f"invalid interval {value!r}")
        return value


class EncodingMap(BaseModel):
    """Case-insensitive mapping from categorical tokens to numbers."""

    model_config = ConfigDict(frozen=True)

    tokens: Dict[str, float] = Field(
        default_factory=lambda: {"high": 1.0, "low": 0.0, "average": 0.5}
    )

    @field_validator("tokens")
    @classmethod
    def _normalise(cls, value: Dict[str, float]) -> Dict[str, float]:
        normalised = {}
        for token, number in value.items():
            if not math.isfinite(number):
                raise ValueError(f"token {token!r} maps to a non-finite value")
            normalised[token.strip().lower()] = float(number)
        return normalised

    def resolve(self, token: str) -> Optional[float]:
        return self.tokens.get(token.strip().lower())


class ErrorReport(BaseModel):
    """Value errors of a model over a dataset."""

    per_pattern_error: List[float]
    mae: float = Field(ge=0)
    mse: float = Field(ge=0)
    shape_error: float = Field(ge=0)


class SynapseDocument(BaseModel):
    indices: List[int]
    weight: float
    signal_mean: float
    degenerate: bool
    unscaled: bool = False


class WaveShapeDocument(BaseModel):
    """Serialized form of a trained wave-shape model."""

    kind: Literal["waveshape"] = "waveshape"
    version: int = DOCUMENT_VERSION
    arity: int = Field(ge=1)
    combine_mode: CombineMode
    output_mean: float
    synapses: List[SynapseDocument] = Field(min_length=1)


class BaselineDocument(BaseModel):
    """Serialized form of a baseline unit."""

    kind: Literal["baseline"] = "baseline"
    version: int = DOCUMENT_VERSION
    arity: int = Field(ge=1)
    weights: List[float]
    bias: float
    seed: int

    @model_validator(mode="after")
    def _weights_match_arity(self) -> "BaselineDocument":
        if len(self.weights) != self.arity:
            raise ValueError("weights length must equal arity")
        return self


class RunReport(BaseModel):
    """The single JSON document a CLI command prints."""

    tool_version: str
    command: List[str]
    config: Dict[str, Any]
    model: Optional[Dict[str, Any]] = None
    reports: Dict[str, ErrorReport] = Field(default_factory=dict)
    details: Dict[str, Any] = Field(default_factory=dict)
    duration_seconds: float = 0.0
