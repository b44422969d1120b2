import io

import numpy as np
import pytest

from ..experiments.runner import compare_models, permutation_test, train_baseline
from ..main import get_workbench
from ..models.schemas import GroupingConfig, LMSConfig, SyntheticSpec
from ..utils import config
from ..utils.data import generate


@pytest.fixture
def linear():
    return generate(SyntheticSpec(arity=3, n_patterns=24, coefficient_range=(1.0, 1.0), seed=4))


def test_train_baseline_follows_config(playsport):
    model = train_baseline(playsport, LMSConfig(learning_rate=0.1, epochs=50, seed=8, init_scale=0.2))
    assert model.seed == 8
    assert len(model.mse_history) == 50


def test_compare_models_reports(linear):
    comparison = compare_models(linear, GroupingConfig(), LMSConfig(), holdout=0.25, split_seed=3)
    assert set(comparison.reports) == {
        "waveshape_train", "baseline_train", "waveshape_initial_train",
        "waveshape_holdout", "baseline_holdout", "waveshape_initial_holdout",
    }
    assert comparison.details["n_train"] == 18
    assert comparison.details["n_holdout"] == 6
    assert comparison.waveshape.structure == ((0, 1, 2),)
    assert comparison.reports["waveshape_holdout"].mae < 1e-9


def test_compare_models_is_reproducible(linear):
    first = compare_models(linear, GroupingConfig(), LMSConfig(epochs=50), 0.25, 3)
    second = compare_models(linear, GroupingConfig(), LMSConfig(epochs=50), 0.25, 3)
    assert first.reports == second.reports
    np.testing.assert_array_equal(first.baseline.weights, second.baseline.weights)


def test_permutation_test_waveshape(playsport):
    result = permutation_test(playsport, trials=10, seed=1)
    assert result.passed
    assert result.groupings == [[[0, 1], [2, 3]]]
    assert result.weight_spread == 0.0


def test_permutation_test_baseline_varies(linear):
    result = permutation_test(linear, trials=5, seed=1, kind="baseline", lms=LMSConfig(epochs=10))
    assert result.identical_groupings
    assert result.weight_spread > 0
    assert not result.passed


def test_permutation_test_needs_trials(playsport):
    with pytest.raises(ValueError):
        permutation_test(playsport, trials=0, seed=1)


def test_workbench_flow():
    bench = get_workbench()
    assert bench.compare(GroupingConfig(), LMSConfig(), holdout=0.0, seed=1) is None
    assert bench.last_error == "No dataset loaded yet."

    assert bench.load(config.PLAYSPORT_CSV)
    comparison = bench.compare(GroupingConfig(), LMSConfig(learning_rate=0.1), holdout=0.0, seed=1)
    assert comparison.waveshape.structure == ((0, 1), (2, 3))
    assert bench.waveshape is comparison.waveshape
    assert bench.baseline is comparison.baseline

    prediction = bench.predict([1, 1, 0, 0])
    assert prediction["waveshape"] == 1.0
    assert prediction["baseline"] == pytest.approx(1.0, abs=0.05)

    assert bench.load(config.PLAYSPORT_CSV)
    assert bench.predict([1, 1, 0, 0]) == {"waveshape": None, "baseline": None}


def test_workbench_reports_failures():
    bench = get_workbench()
    assert not bench.load(io.BytesIO(b"a,b\n1,2\n"))
    assert "missing output column" in bench.last_error

    assert bench.load(config.PLAYSPORT_CSV)
    bench.compare(GroupingConfig(), LMSConfig(), holdout=0.0, seed=1)
    prediction = bench.predict([1.0])
    assert prediction == {"waveshape": None, "baseline": None}
    assert bench.last_error.startswith("Error predicting")


def test_workbench_compare():
    bench = get_workbench()
    bench.load(config.PLAYSPORT_CSV)
    comparison = bench.compare(GroupingConfig(), LMSConfig(), holdout=0.0, seed=1)
    assert comparison.reports["waveshape_train"].mae == 0.0
