# waveshape/models/grouping.py
"""
Synapse-group search.

Inputs are partitioned into groups whose combined signal has a difference
shape close to the output's. A group's shape is rescaled to the output's
shape-change average before it is compared, since a single weight per group
can always supply that scaling later.
"""

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import ArityError, DivergenceError, GroupingError, InsufficientPatternsError
from ..utils.config import thread_count
from ..utils.data import Dataset, canonicalize
from ..utils.shape import shape_change_average, shape_distance, shape_of
from .schemas import CombineMode, GroupingConfig

logger = logging.getLogger(__name__)

Structure = Tuple[Tuple[int, ...], ...]

# scores closer than this are ties
SCORE_DECIMALS = 12
# below this many candidate groups, threads cost more than they save
PARALLEL_MIN_GROUPS = 64


@dataclass(frozen=True, order=True)
class SynapseGroup:
    """Non-empty set of input column indices sharing one weight."""

    input_indices: Tuple[int, ...]

    def __post_init__(self):
        indices = tuple(sorted(set(int(i) for i in self.input_indices)))
        if not indices:
            raise GroupingError("a synapse group needs at least one input")
        if indices[0] < 0:
            raise GroupingError(f"negative input index in group {indices}")
        object.__setattr__(self, "input_indices", indices)

    def __len__(self) -> int:
        return len(self.input_indices)


@dataclass(frozen=True)
class Partition:
    """Disjoint synapse groups plus the inputs left unconnected."""

    groups: Tuple[SynapseGroup, ...]
    dropped: Tuple[int, ...] = field(default=())

    def __post_init__(self):
        groups = tuple(sorted(
            g if isinstance(g, SynapseGroup) else SynapseGroup(tuple(g)) for g in self.groups
        ))
        if not groups:
            raise GroupingError("a partition needs at least one group")
        used = [i for g in groups for i in g.input_indices]
        if len(used) != len(set(used)):
            raise GroupingError("synapse groups must be pairwise disjoint")
        dropped = tuple(sorted(set(int(i) for i in self.dropped)))
        if set(dropped) & set(used):
            raise GroupingError("dropped inputs must not belong to any group")
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "dropped", dropped)

    @classmethod
    def from_structure(cls, structure: Sequence[Sequence[int]], arity: int) -> "Partition":
        used = {i for g in structure for i in g}
        return cls(tuple(SynapseGroup(tuple(g)) for g in structure),
                   tuple(i for i in range(arity) if i not in used))

    @property
    def structure(self) -> Structure:
        return tuple(g.input_indices for g in self.groups)

    @property
    def used_inputs(self) -> Tuple[int, ...]:
        return tuple(sorted(i for g in self.groups for i in g.input_indices))

    def validate(self, arity: int) -> None:
        """Check the partition covers exactly the inputs 0..arity-1."""
        covered = set(self.used_inputs) | set(self.dropped)
        if covered != set(range(arity)):
            raise GroupingError(
                f"partition covers inputs {sorted(covered)}, expected 0..{arity - 1}"
            )


def combined_signal(group: SynapseGroup, dataset: Dataset, mode: CombineMode = "sum") -> np.ndarray:
    """Per-pattern sum (or mean) of the group's inputs, in presentation order."""
    indices = list(group.input_indices)
    if indices[-1] >= dataset.arity:
        raise ArityError(f"group {group.input_indices} refers to inputs beyond arity {dataset.arity}")
    columns = dataset.inputs[:, indices]
    if mode == "mean":
        return columns.mean(axis=1)
    return columns.sum(axis=1)


def horizontal_shape(pattern_inputs: Sequence[float]) -> np.ndarray:
    """Shape across the input values of a single pattern, in input-index order."""
    return shape_of(pattern_inputs)


def set_partitions(items: Sequence[int]) -> Iterator[Structure]:
    """
    Yield every set partition of items (Bell(n) of them).

    Each element is placed, in order, into one of the existing blocks or a
    new one, so blocks come out sorted and ordered by their first element.
    """
    items = list(items)
    if not items:
        return

    def _extend(position: int, blocks: List[List[int]]) -> Iterator[Structure]:
        if position == len(items):
            yield tuple(tuple(block) for block in blocks)
            return
        item = items[position]
        for block in blocks:
            block.append(item)
            yield from _extend(position + 1, blocks)
            block.pop()
        blocks.append([item])
        yield from _extend(position + 1, blocks)
        blocks.pop()

    yield from _extend(0, [])


def default_penalty(output_change_average: float) -> float:
    return 0.01 * (output_change_average + 1.0)


class GroupStats(NamedTuple):
    distance: float
    cancellation: float


PartitionKey = Tuple[float, int, float, int, Structure]


class ShapeScorer:
    """
    Scores partitions of one dataset.

    The dataset is put in canonical order first, so scores do not depend on
    the order patterns were presented in. Per-group terms are cached; a
    partition's score is the sum of its groups' terms plus the group penalty.
    """

    def __init__(self, dataset: Dataset, config: GroupingConfig):
        if dataset.n_patterns < 2:
            raise InsufficientPatternsError(
                f"grouping needs at least 2 patterns, got {dataset.n_patterns}"
            )
        self.dataset = canonicalize(dataset)
        self.config = config
        self.output_shape = shape_of(self.dataset.targets)
        self.output_change = shape_change_average(self.dataset.targets)
        self.penalty = (
            config.group_count_penalty
            if config.group_count_penalty is not None
            else default_penalty(self.output_change)
        )
        self._column_norms = np.linalg.norm(np.diff(self.dataset.inputs, axis=0), axis=0)
        self._cache: Dict[Tuple[int, ...], GroupStats] = {}

    def _compute(self, indices: Tuple[int, ...]) -> GroupStats:
        signal = combined_signal(SynapseGroup(indices), self.dataset, self.config.combine_mode)
        delta = shape_of(signal)
        change = shape_change_average(signal)
        with np.errstate(over="ignore", invalid="ignore"):
            if change > 0:
                delta = delta * (self.output_change / change)
            distance = shape_distance(delta, self.output_shape, self.config.sign_aware)
        if not math.isfinite(distance):
            raise DivergenceError(f"shape distance of group {indices} is not finite; rescale the data")

        member_norms = math.fsum(float(self._column_norms[i]) for i in indices)
        combined_norm = float(np.linalg.norm(shape_of(signal)))
        if self.config.combine_mode == "mean":
            member_norms /= len(indices)
        return GroupStats(distance, max(0.0, member_norms - combined_norm))

    def group_stats(self, indices: Tuple[int, ...]) -> GroupStats:
        stats = self._cache.get(indices)
        if stats is None:
            stats = self._compute(indices)
            self._cache[indices] = stats
        return stats

    def prime(self, candidates: Sequence[Tuple[int, ...]]) -> None:
        """Fill the cache for many groups, in parallel when worthwhile."""
        missing = [c for c in candidates if c not in self._cache]
        workers = thread_count()
        if workers > 1 and len(missing) >= PARALLEL_MIN_GROUPS:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(self._compute, missing))
        else:
            results = [self._compute(c) for c in missing]
        self._cache.update(zip(missing, results))

    def score(self, structure: Structure) -> float:
        distances = math.fsum(self.group_stats(g).distance for g in structure)
        return distances + self.penalty * len(structure)

    def key(self, structure: Structure) -> PartitionKey:
        """Sort key: score, then fewer groups, less cancellation, fewer inputs, lexicographic."""
        cancellation = math.fsum(self.group_stats(g).cancellation for g in structure)
        return (
            round(self.score(structure), SCORE_DECIMALS),
            len(structure),
            round(cancellation, SCORE_DECIMALS),
            sum(len(g) for g in structure),
            structure,
        )


def score_partition(partition: Partition, dataset: Dataset, config: GroupingConfig) -> float:
    """
    Shape-match score of a partition; lower is better.

    Sum over groups of the distance between the rescaled group shape and the
    output shape, plus group_count_penalty per group.
    """
    partition.validate(dataset.arity)
    return ShapeScorer(dataset, config).score(partition.structure)


def _candidate_structures(arity: int, allow_drop: bool) -> Iterator[Structure]:
    if not allow_drop:
        yield from set_partitions(range(arity))
        return
    for size in range(1, arity + 1):
        for subset in itertools.combinations(range(arity), size):
            yield from set_partitions(subset)


def search_exhaustive(dataset: Dataset, config: GroupingConfig) -> Partition:
    """
    Best partition over all set partitions of the inputs.

    With allow_drop, partitions of every non-empty subset are tried and the
    remaining inputs are dropped.
    """
    if dataset.arity > config.max_exhaustive_inputs:
        raise GroupingError(
            f"exhaustive search is capped at {config.max_exhaustive_inputs} inputs "
            f"(dataset has {dataset.arity}); use greedy search instead"
        )
    scorer = ShapeScorer(dataset, config)
    scorer.prime([
        subset
        for size in range(1, dataset.arity + 1)
        for subset in itertools.combinations(range(dataset.arity), size)
    ])

    best: Optional[PartitionKey] = None
    count = 0
    for structure in _candidate_structures(dataset.arity, config.allow_drop):
        count += 1
        key = scorer.key(structure)
        if best is None or key < best:
            best = key
    logger.debug("Scored %d candidate partitions", count)
    return Partition.from_structure(best[-1], dataset.arity)


def _merge(structure: Structure, a: int, b: int) -> Structure:
    merged = tuple(sorted(structure[a] + structure[b]))
    rest = [g for i, g in enumerate(structure) if i not in (a, b)]
    return tuple(sorted(rest + [merged]))


def _prune_moves(structure: Structure) -> Iterator[Structure]:
    if len(structure) > 1:
        for i in range(len(structure)):
            yield structure[:i] + structure[i + 1:]
    for i, group in enumerate(structure):
        if len(group) > 1:
            for member in group:
                smaller = tuple(x for x in group if x != member)
                yield tuple(sorted(structure[:i] + (smaller,) + structure[i + 1:]))


def search_greedy(dataset: Dataset, config: GroupingConfig) -> Partition:
    """
    Agglomerative search.

    Starts from singletons and merges the pair of groups that lowers the score
    most, until no merge lowers it. With allow_drop, groups or single members
    are then removed while that improves the partition.
    """
    scorer = ShapeScorer(dataset, config)
    current: Structure = tuple((i,) for i in range(dataset.arity))
    current_key = scorer.key(current)

    while len(current) > 1:
        best_key: Optional[PartitionKey] = None
        for a, b in itertools.combinations(range(len(current)), 2):
            key = scorer.key(_merge(current, a, b))
            if best_key is None or key < best_key:
                best_key = key
        if best_key[0] >= current_key[0]:
            break
        current, current_key = best_key[-1], best_key
        logger.debug("Merged to %s (score %.6g)", current, current_key[0])

    if config.allow_drop:
        while True:
            best_key = None
            for candidate in _prune_moves(current):
                key = scorer.key(candidate)
                if best_key is None or key < best_key:
                    best_key = key
            if best_key is None or not best_key < current_key:
                break
            current, current_key = best_key[-1], best_key
            logger.debug("Pruned to %s (score %.6g)", current, current_key[0])

    return Partition.from_structure(current, dataset.arity)


def search(dataset: Dataset, config: GroupingConfig) -> Partition:
    """Run the configured strategy; auto uses exhaustive search up to the cap."""
    strategy = config.search
    if strategy == "auto":
        strategy = "exhaustive" if dataset.arity <= config.max_exhaustive_inputs else "greedy"
    logger.info("Grouping %d inputs with %s search", dataset.arity, strategy)
    if strategy == "exhaustive":
        return search_exhaustive(dataset, config)
    return search_greedy(dataset, config)
