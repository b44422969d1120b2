import json

import pytest

from ..cli import EXIT_DATA, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, main
from ..models.schemas import RunReport
from ..utils import config


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def _report(out):
    return RunReport.model_validate_json(out)


@pytest.fixture
def linear_csv(tmp_path, capsys):
    path = tmp_path / "linear.csv"
    code, _ = _run(
        capsys, "generate", "--arity", "3", "--patterns", "40", "--coef-low", "1", "--coef-high", "1",
        "--seed", "7", "--out", str(path),
    )
    assert code == EXIT_OK
    return path


def test_train_playsport(capsys):
    code, out = _run(capsys, "train", "--data", config.PLAYSPORT_CSV)
    assert code == EXIT_OK
    report = _report(out)
    assert report.command[0] == "train"
    assert report.model["groups"] == [["sun", "daylight"], ["wind", "rain"]]
    positive, negative = report.model["weights"]
    assert positive > 0 > negative
    assert report.reports["train"].mae == 0.0
    assert report.details["horizontal_shapes"] == [[0.0, -1.0, 0.0], [0.0, 1.0, 0.0]]


def test_train_baseline_playsport(capsys):
    code, out = _run(capsys, "train", "--data", config.PLAYSPORT_CSV, "--model", "baseline", "--pretty")
    assert code == EXIT_OK
    assert "\n  " in out
    report = _report(out)
    assert report.model["kind"] == "baseline"
    assert report.model["epochs_run"] == config.DEFAULT_EPOCHS
    assert report.reports["train"].mae < 0.05


def test_train_then_evaluate(tmp_path, capsys):
    model_file = tmp_path / "model.json"
    code, out = _run(capsys, "train", "--data", config.PLAYSPORT_CSV, "--out", str(model_file))
    assert code == EXIT_OK
    assert _report(out).details["model_file"] == str(model_file)
    assert json.loads(model_file.read_text())["kind"] == "waveshape"

    code, out = _run(capsys, "evaluate", "--data", config.PLAYSPORT_CSV, "--model-file", str(model_file))
    assert code == EXIT_OK
    report = _report(out)
    assert report.reports["evaluate"].mae == 0.0
    assert report.reports["initial"].mae == 0.5


def test_evaluate_arity_mismatch(tmp_path, capsys, linear_csv):
    model_file = tmp_path / "model.json"
    _run(capsys, "train", "--data", config.PLAYSPORT_CSV, "--out", str(model_file))
    code, out = _run(capsys, "evaluate", "--data", str(linear_csv), "--model-file", str(model_file))
    assert code == EXIT_DATA
    assert out == ""


def test_missing_data_file(tmp_path, capsys):
    out_file = tmp_path / "model.json"
    code, out = _run(capsys, "train", "--data", str(tmp_path / "absent.csv"), "--out", str(out_file))
    assert code == EXIT_DATA
    assert out == ""
    assert not out_file.exists()


def test_unknown_flag(capsys):
    code, out = _run(capsys, "train", "--data", config.PLAYSPORT_CSV, "--bogus")
    assert code == EXIT_USAGE
    assert out == ""


def test_bad_encode_pair(capsys):
    code, _ = _run(capsys, "train", "--data", config.PLAYSPORT_CSV, "--encode", "warm")
    assert code == EXIT_USAGE


def test_permute_test_single_pattern(tmp_path, capsys):
    data = tmp_path / "one.csv"
    data.write_text("a,b,output:y\n1,2,3\n")
    code, out = _run(capsys, "permute-test", "--data", str(data))
    assert code == EXIT_DATA
    assert out == ""


def test_permute_test_passes(capsys, linear_csv):
    code, out = _run(capsys, "permute-test", "--data", str(linear_csv), "--trials", "20")
    assert code == EXIT_OK
    details = _report(out).details
    assert details["passed"] is True
    assert details["identical_groupings"] is True
    assert details["weight_spread"] == 0.0
    assert len(details["groupings"]) == 1


def test_permute_test_baseline_is_reported_only(capsys, linear_csv):
    code, out = _run(
        capsys, "permute-test", "--data", str(linear_csv), "--trials", "5", "--model", "baseline", "--epochs", "20",
    )
    assert code == EXIT_OK
    details = _report(out).details
    assert details["asserted"] is False
    assert details["weight_spread"] > 0


def test_generate_is_reproducible(capsys):
    argv = ("generate", "--arity", "4", "--patterns", "25", "--noise-sd", "0.1", "--seed", "3")
    code, first = _run(capsys, *argv)
    assert code == EXIT_OK
    _, second = _run(capsys, *argv)
    assert first == second
    assert first.splitlines()[0] == "x1,x2,x3,x4,output:y"
    assert len(first.splitlines()) == 26


def test_generate_rejects_zero_arity(capsys):
    code, out = _run(capsys, "generate", "--arity", "0", "--patterns", "5")
    assert code == EXIT_USAGE
    assert out == ""


def test_compare_on_noiseless_linear_data(capsys, linear_csv):
    code, out = _run(capsys, "compare", "--data", str(linear_csv), "--holdout", "0.25", "--split-seed", "2")
    assert code == EXIT_OK
    report = _report(out)
    assert RunReport.model_validate_json(report.model_dump_json()) == report
    assert report.details["n_train"] == 30
    assert report.details["n_holdout"] == 10
    assert report.model["waveshape"]["groups"] == [["x1", "x2", "x3"]]
    assert report.reports["waveshape_holdout"].mae < 0.05
    assert report.reports["baseline_holdout"].mae < 0.05
    assert report.details["least_squares_train_mse"] < 1e-20


def test_compare_without_holdout(capsys, linear_csv):
    code, out = _run(capsys, "compare", "--data", str(linear_csv), "--holdout", "0")
    assert code == EXIT_OK
    report = _report(out)
    assert sorted(report.reports) == ["baseline_train", "waveshape_initial_train", "waveshape_train"]
    assert report.details["n_holdout"] == 0


def test_compare_on_unrelated_targets(tmp_path, capsys):
    data = tmp_path / "uniform.csv"
    _run(
        capsys, "generate", "--arity", "3", "--patterns", "30", "--generator", "random_uniform",
        "--seed", "9", "--out", str(data),
    )
    code, out = _run(capsys, "compare", "--data", str(data))
    assert code == EXIT_OK
    reports = _report(out).reports
    assert reports["waveshape_train"].mae > 0
    assert reports["baseline_train"].mae > 0


def test_divergence_exit_code(capsys):
    code, out = _run(
        capsys, "train", "--data", config.PLAYSPORT_CSV, "--model", "baseline", "--learning-rate", "10",
    )
    assert code == EXIT_NUMERIC
    assert out == ""


def test_exhaustive_cap_is_a_usage_error(capsys):
    code, _ = _run(
        capsys, "train", "--data", config.PLAYSPORT_CSV, "--search", "exhaustive", "--max-exhaustive", "2",
    )
    assert code == EXIT_USAGE


def test_permute_test_playsport(capsys):
    code, out = _run(capsys, "permute-test", "--data", config.PLAYSPORT_CSV, "--trials", "100")
    assert code == EXIT_OK
    details = _report(out).details
    assert details["groupings"] == [[[0, 1], [2, 3]]]
    assert details["weight_spread"] == 0.0


def test_compare_playsport_train_only(capsys):
    code, out = _run(capsys, "compare", "--data", config.PLAYSPORT_CSV, "--holdout", "0")
    assert code == EXIT_OK
    report = _report(out)
    assert not any(name.endswith("_holdout") for name in report.reports)
    assert report.reports["waveshape_train"].mae == 0.0


def test_overflowing_weight_exit_code(tmp_path, capsys):
    data = tmp_path / "extreme.csv"
    data.write_text("x,output:y\n0,0\n1e-200,1e200\n2e-200,2e200\n")
    out_file = tmp_path / "model.json"
    code, out = _run(capsys, "train", "--data", str(data), "--out", str(out_file))
    assert code == EXIT_NUMERIC
    assert out == ""
    assert not out_file.exists()
