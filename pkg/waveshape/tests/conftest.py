import logging

import numpy as np
import pytest

from ..models.schemas import GroupingConfig
from ..utils import config
from ..utils.data import Dataset, load_csv

SUN, DAYLIGHT, WIND, RAIN = range(4)


@pytest.fixture
def playsport():
    return load_csv(config.PLAYSPORT_CSV)


@pytest.fixture
def playsport_config():
    return GroupingConfig(group_count_penalty=0.1, sign_aware=True, combine_mode="sum")


@pytest.fixture
def rng():
    return np.random.default_rng(20120401)


@pytest.fixture(autouse=True)
def restore_logging():
    """Commands install a stderr handler on the root logger; drop it after each test."""
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    for handler in list(root.handlers):
        if handler not in handlers:
            root.removeHandler(handler)
    root.setLevel(level)


def random_dataset(rng: np.random.Generator, arity: int, n_patterns: int) -> Dataset:
    names = tuple(f"x{i + 1}" for i in range(arity))
    return Dataset(names, "y", rng.uniform(-1, 1, size=(n_patterns, arity)), rng.uniform(-1, 1, size=n_patterns))
