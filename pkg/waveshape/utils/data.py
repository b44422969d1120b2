# waveshape/utils/data.py
import io
import logging
import os
import re
from dataclasses import dataclass
from typing import BinaryIO, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ..exceptions import DataError
from ..models.schemas import EncodingMap, SyntheticSpec

logger = logging.getLogger(__name__)

OUTPUT_PREFIX = "output:"

_DECIMAL = re.compile(r"[+-]?(?:[0-9]+\.?[0-9]*|\.[0-9]+)(?:[eE][+-]?[0-9]+)?")
_NON_FINITE = re.compile(r"[+-]?(?:nan|inf|infinity)", re.IGNORECASE)


def make_rng(seed: int) -> np.random.Generator:
    """Seeded generator on the PCG64 bit generator, reproducible across platforms."""
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    Ordered patterns of input vectors and one target each.

    inputs has shape (n_patterns, arity) and targets shape (n_patterns,).
    Both arrays are read-only.
    """

    input_names: Tuple[str, ...]
    output_name: str
    inputs: np.ndarray
    targets: np.ndarray

    def __post_init__(self):
        inputs = np.array(self.inputs, dtype=np.float64)
        targets = np.array(self.targets, dtype=np.float64).reshape(-1)
        names = tuple(self.input_names)
        if not names:
            raise DataError("dataset needs at least one input column")
        if inputs.ndim == 1:
            inputs = inputs.reshape(-1, len(names))
        if inputs.ndim != 2 or inputs.shape[1] != len(names):
            raise DataError(f"inputs must have {len(names)} columns, got shape {inputs.shape}")
        if inputs.shape[0] != targets.size:
            raise DataError(f"{inputs.shape[0]} input rows but {targets.size} targets")
        if targets.size < 1:
            raise DataError("dataset must contain at least one pattern")
        if not (np.all(np.isfinite(inputs)) and np.all(np.isfinite(targets))):
            raise DataError("dataset contains non-finite values")
        inputs.setflags(write=False)
        targets.setflags(write=False)
        object.__setattr__(self, "input_names", names)
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "targets", targets)

    @property
    def arity(self) -> int:
        return len(self.input_names)

    @property
    def n_patterns(self) -> int:
        return int(self.targets.size)

    def take(self, order: Sequence[int]) -> "Dataset":
        """Dataset with patterns in the given index order."""
        index = np.asarray(order, dtype=np.intp)
        return Dataset(self.input_names, self.output_name, self.inputs[index], self.targets[index])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.input_names == other.input_names
            and self.output_name == other.output_name
            and np.array_equal(self.inputs, other.inputs)
            and np.array_equal(self.targets, other.targets)
        )

    __hash__ = None


def canonical_order(dataset: Dataset) -> np.ndarray:
    """
    Index order sorting patterns by target, ties by input vector.

    Any permutation of the same patterns yields the same ordered sequence.
    """
    # lexsort uses the last key as primary
    keys = [dataset.inputs[:, col] for col in reversed(range(dataset.arity))]
    keys.append(dataset.targets)
    return np.lexsort(keys)


def canonicalize(dataset: Dataset) -> Dataset:
    return dataset.take(canonical_order(dataset))


def _parse_cell(cell, encoding: EncodingMap, line: int, column: str) -> float:
    if not isinstance(cell, str) or cell.strip() == "":
        raise DataError(f"line {line}: missing value for column {column!r} (ragged row)")
    text = cell.strip()
    if _DECIMAL.fullmatch(text):
        value = float(text)
    else:
        value = encoding.resolve(text)
        if value is None and _NON_FINITE.fullmatch(text):
            value = float(text)
        if value is None:
            raise DataError(f"line {line}: unmappable token {text!r} in column {column!r}")
    if not np.isfinite(value):
        raise DataError(f"line {line}: non-finite value {text!r} in column {column!r}")
    return value


def load_csv(
    source: Union[str, os.PathLike, BinaryIO],
    encoding: Optional[EncodingMap] = None,
) -> Dataset:
    """
    Load a dataset from CSV.

    The header names the columns; exactly one column is prefixed with
    "output:" and every other column is an input, in header order. Numeric
    cells are parsed as decimals, anything else goes through the encoding map.

    Args:
        source: Path or binary stream of UTF-8 text
        encoding: Token map for categorical cells (High/Low/Average by default)

    Returns:
        Dataset with rows in file order
    """
    encoding = encoding or EncodingMap()
    try:
        raw = pd.read_csv(
            source,
            header=None,
            dtype=str,
            keep_default_na=False,
            na_filter=False,
            encoding="utf-8",
            skip_blank_lines=True,
        )
    except pd.errors.EmptyDataError:
        raise DataError("CSV is empty: expected a header row")
    except pd.errors.ParserError as e:
        raise DataError(f"ragged row: {e}")
    except UnicodeDecodeError as e:
        raise DataError(f"CSV is not valid UTF-8: {e}")

    columns = [str(name).strip() for name in raw.iloc[0]]
    repeated = sorted({name for name in columns if columns.count(name) > 1})
    if repeated:
        raise DataError(f"duplicate column names: {repeated}")
    frame = raw.iloc[1:]
    outputs = [name for name in columns if name.startswith(OUTPUT_PREFIX)]
    if not outputs:
        raise DataError(f"missing output column: no header starts with {OUTPUT_PREFIX!r}")
    if len(outputs) > 1:
        raise DataError(f"more than one output column: {outputs}")
    if frame.shape[0] == 0:
        raise DataError("CSV has zero data rows")

    output_column = outputs[0]
    input_columns = [name for name in columns if name != output_column]
    if not input_columns:
        raise DataError("CSV has no input columns")

    cells = frame.to_numpy(dtype=object)
    position = {name: i for i, name in enumerate(columns)}
    inputs = np.empty((frame.shape[0], len(input_columns)), dtype=np.float64)
    targets = np.empty(frame.shape[0], dtype=np.float64)
    for row in range(frame.shape[0]):
        line = row + 2
        for col, name in enumerate(input_columns):
            inputs[row, col] = _parse_cell(cells[row, position[name]], encoding, line, name)
        targets[row] = _parse_cell(cells[row, position[output_column]], encoding, line, output_column)

    dataset = Dataset(tuple(input_columns), output_column[len(OUTPUT_PREFIX):], inputs, targets)
    logger.info("Loaded %d patterns with %d inputs", dataset.n_patterns, dataset.arity)
    return dataset


def to_csv(dataset: Dataset) -> str:
    """Serialize a dataset to CSV text that load_csv reads back unchanged."""
    columns = list(dataset.input_names) + [OUTPUT_PREFIX + dataset.output_name]
    values = np.column_stack([dataset.inputs, dataset.targets])
    # repr gives the shortest string that round-trips the double
    frame = pd.DataFrame([[repr(float(v)) for v in row] for row in values], columns=columns)
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, lineterminator="\n")
    return buffer.getvalue()


def generate(spec: SyntheticSpec) -> Dataset:
    """
    Draw a synthetic dataset.

    random_linear: target = coefficients . inputs + N(0, noise_sd) noise.
    random_uniform: targets are drawn independently of the inputs.
    """
    rng = make_rng(spec.seed)
    low, high = spec.input_range
    names = tuple(f"x{i + 1}" for i in range(spec.arity))
    if spec.generator == "random_linear":
        coefficients = rng.uniform(*spec.coefficient_range, size=spec.arity)
        inputs = rng.uniform(low, high, size=(spec.n_patterns, spec.arity))
        targets = inputs @ coefficients
        if spec.noise_sd > 0:
            targets = targets + rng.normal(0.0, spec.noise_sd, size=spec.n_patterns)
    else:
        inputs = rng.uniform(low, high, size=(spec.n_patterns, spec.arity))
        targets = rng.uniform(low, high, size=spec.n_patterns)
    return Dataset(names, "y", inputs, targets)


def permute_patterns(dataset: Dataset, seed: int) -> Dataset:
    """Seeded uniform shuffle of pattern order."""
    return dataset.take(make_rng(seed).permutation(dataset.n_patterns))


def split_holdout(dataset: Dataset, fraction: float, seed: int) -> Tuple[Dataset, Optional[Dataset]]:
    """
    Shuffle by seed, then split: the prefix trains, the rest is held out.

    The training part always keeps at least two patterns. Returns
    (train, None) when nothing is held out.
    """
    if not 0 <= fraction < 1:
        raise DataError(f"holdout fraction must be in [0, 1), got {fraction}")
    n_holdout = int(np.floor(fraction * dataset.n_patterns))
    n_holdout = max(0, min(n_holdout, dataset.n_patterns - 2))
    if n_holdout == 0:
        return dataset, None
    shuffled = permute_patterns(dataset, seed)
    n_train = dataset.n_patterns - n_holdout
    return shuffled.take(range(n_train)), shuffled.take(range(n_train, dataset.n_patterns))
