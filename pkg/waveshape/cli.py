"""Command-line front end: train, evaluate, compare, permute-test, generate."""

import argparse
import json
import logging
import os
import sys
import time
from typing import Any, Callable, Dict, List, Optional

from pydantic import ValidationError

from . import __version__
from .exceptions import (
    ArityError,
    DataError,
    DivergenceError,
    GroupingError,
    ShapeError,
)
from .experiments.runner import compare_models, permutation_test, train_baseline
from .models import neuron
from .models.baseline import BaselineModel, describe_baseline, evaluate_baseline
from .models.grouping import horizontal_shape
from .models.persistence import load_model, save_model
from .models.schemas import EncodingMap, GroupingConfig, LMSConfig, RunReport, SyntheticSpec
from .utils import config
from .utils.data import generate, load_csv, to_csv

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


def _emit(report: RunReport, pretty: bool) -> None:
    print(report.model_dump_json(indent=2 if pretty else None))


def _encoding_from(pairs: Optional[List[str]]) -> EncodingMap:
    tokens = dict(EncodingMap().tokens)
    for pair in pairs or []:
        token, sep, value = pair.partition("=")
        if not sep:
            raise ValueError(f"--encode expects TOKEN=VALUE, got {pair!r}")
        tokens[token] = float(value)
    return EncodingMap(tokens=tokens)


def _grouping_from(args: argparse.Namespace) -> GroupingConfig:
    return GroupingConfig(
        combine_mode=args.combine_mode,
        max_exhaustive_inputs=args.max_exhaustive,
        group_count_penalty=args.penalty,
        allow_drop=args.allow_drop,
        sign_aware=not args.no_sign_aware,
        search=args.search,
        keep_unscaled_if_better=args.keep_unscaled,
    )


def _lms_from(args: argparse.Namespace) -> LMSConfig:
    return LMSConfig(
        learning_rate=args.learning_rate,
        epochs=args.epochs,
        batch=args.batch,
        seed=args.seed,
        init_scale=args.init_scale,
    )


def _echo(args: argparse.Namespace) -> Dict[str, Any]:
    echo = {k: v for k, v in vars(args).items() if k not in ("handler", "pretty", "verbose")}
    if "data" in echo and echo["data"] is not None:
        echo["data"] = os.fspath(echo["data"])
    return echo


def _report(args: argparse.Namespace, argv: List[str], started: float, **fields: Any) -> RunReport:
    return RunReport(
        tool_version=__version__,
        command=argv,
        config=_echo(args),
        duration_seconds=time.perf_counter() - started,
        **fields,
    )


def cmd_train(args: argparse.Namespace, argv: List[str]) -> int:
    started = time.perf_counter()
    dataset = load_csv(args.data, _encoding_from(args.encode))
    reports = {}
    details: Dict[str, Any] = {}
    if args.model == "waveshape":
        model = neuron.train(dataset, _grouping_from(args))
        summary = neuron.describe(model, dataset.input_names)
        reports["train"] = neuron.evaluate(model, dataset)
        reports["initial"] = neuron.evaluate_initial(model, dataset)
        if dataset.arity >= 2:
            details["horizontal_shapes"] = [
                horizontal_shape(row).tolist() for row in dataset.inputs
            ]
    else:
        model = train_baseline(dataset, _lms_from(args))
        summary = describe_baseline(model, dataset.input_names)
        summary["mse_history_tail"] = list(model.mse_history[-5:])
        reports["train"] = evaluate_baseline(model, dataset)
    if args.out:
        save_model(model, args.out)
        details["model_file"] = os.fspath(args.out)
    _emit(_report(args, argv, started, model=summary, reports=reports, details=details), args.pretty)
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace, argv: List[str]) -> int:
    started = time.perf_counter()
    model = load_model(args.model_file)
    dataset = load_csv(args.data, _encoding_from(args.encode))
    if model.arity != dataset.arity:
        raise ArityError(f"model expects {model.arity} inputs, dataset has {dataset.arity}")
    if isinstance(model, BaselineModel):
        summary = describe_baseline(model, dataset.input_names)
        reports = {"evaluate": evaluate_baseline(model, dataset)}
    else:
        summary = neuron.describe(model, dataset.input_names)
        reports = {
            "evaluate": neuron.evaluate(model, dataset),
            "initial": neuron.evaluate_initial(model, dataset),
        }
    _emit(_report(args, argv, started, model=summary, reports=reports), args.pretty)
    return EXIT_OK


def cmd_compare(args: argparse.Namespace, argv: List[str]) -> int:
    started = time.perf_counter()
    dataset = load_csv(args.data, _encoding_from(args.encode))
    comparison = compare_models(
        dataset, _grouping_from(args), _lms_from(args), args.holdout, args.split_seed
    )
    summary = {
        "waveshape": neuron.describe(comparison.waveshape, dataset.input_names),
        "baseline": describe_baseline(comparison.baseline, dataset.input_names),
    }
    _emit(
        _report(args, argv, started, model=summary, reports=comparison.reports, details=comparison.details),
        args.pretty,
    )
    return EXIT_OK


def cmd_permute_test(args: argparse.Namespace, argv: List[str]) -> int:
    started = time.perf_counter()
    dataset = load_csv(args.data, _encoding_from(args.encode))
    result = permutation_test(
        dataset, args.trials, args.seed, args.model, _grouping_from(args), _lms_from(args)
    )
    details = {
        "trials": result.trials,
        "identical_groupings": result.identical_groupings,
        "weight_spread": result.weight_spread,
        "groupings": result.groupings,
        "passed": result.passed,
        "asserted": args.model == "waveshape",
    }
    _emit(_report(args, argv, started, details=details), args.pretty)
    if args.model == "waveshape" and not result.passed:
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_generate(args: argparse.Namespace, argv: List[str]) -> int:
    started = time.perf_counter()
    spec = SyntheticSpec(
        arity=args.arity,
        n_patterns=args.patterns,
        generator=args.generator,
        coefficient_range=(args.coef_low, args.coef_high),
        input_range=(args.input_low, args.input_high),
        noise_sd=args.noise_sd,
        seed=args.seed,
    )
    text = to_csv(generate(spec))
    if args.out is None:
        sys.stdout.write(text)
        return EXIT_OK
    with open(args.out, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    _emit(_report(args, argv, started, details={"spec": spec.model_dump(mode="json")}), args.pretty)
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--pretty", action="store_true", help="Indent the JSON report")
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG level on stderr")


def _add_data(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--data", required=True, help="CSV with one 'output:' column")
    parser.add_argument(
        "--encode",
        action="append",
        metavar="TOKEN=VALUE",
        help="Extra categorical token mapping (repeatable); High=1, Low=0, Average=0.5 built in",
    )


def _add_grouping(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--combine-mode", choices=["sum", "mean"], default="sum")
    parser.add_argument("--search", choices=["auto", "exhaustive", "greedy"], default="auto")
    parser.add_argument("--max-exhaustive", type=int, default=config.MAX_EXHAUSTIVE_INPUTS)
    parser.add_argument(
        "--penalty", type=float, default=None,
        help="Per-group score penalty (default 0.01 * (output shape change average + 1))",
    )
    parser.add_argument("--allow-drop", action="store_true", help="Allow unmatched inputs to be removed")
    parser.add_argument("--no-sign-aware", action="store_true", help="Do not count mirrored shapes as matches")
    parser.add_argument("--keep-unscaled", action="store_true", help="Keep weight +-1 when scaling does not help")


def _add_lms(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--learning-rate", type=float, default=config.DEFAULT_LEARNING_RATE)
    parser.add_argument("--epochs", type=int, default=config.DEFAULT_EPOCHS)
    parser.add_argument("--batch", action="store_true", help="Batch instead of per-pattern updates")
    parser.add_argument("--seed", type=int, default=config.DEFAULT_SEED)
    parser.add_argument("--init-scale", type=float, default=config.DEFAULT_INIT_SCALE)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="waveshape",
        description="Train and compare the wave-shape neuron against a delta-rule baseline",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    train_cmd = sub.add_parser("train", help="Train one model on a CSV dataset")
    _add_data(train_cmd)
    train_cmd.add_argument("--model", choices=["waveshape", "baseline"], default="waveshape")
    train_cmd.add_argument("--out", default=None, help="Write the trained model as JSON")
    _add_grouping(train_cmd)
    _add_lms(train_cmd)
    _add_common(train_cmd)
    train_cmd.set_defaults(handler=cmd_train)

    evaluate_cmd = sub.add_parser("evaluate", help="Evaluate a saved model on a CSV dataset")
    _add_data(evaluate_cmd)
    evaluate_cmd.add_argument("--model-file", required=True)
    _add_common(evaluate_cmd)
    evaluate_cmd.set_defaults(handler=cmd_evaluate)

    compare_cmd = sub.add_parser("compare", help="Train both models and compare their errors")
    _add_data(compare_cmd)
    compare_cmd.add_argument("--holdout", type=float, default=config.DEFAULT_HOLDOUT)
    compare_cmd.add_argument("--split-seed", type=int, default=config.DEFAULT_SEED)
    _add_grouping(compare_cmd)
    _add_lms(compare_cmd)
    _add_common(compare_cmd)
    compare_cmd.set_defaults(handler=cmd_compare)

    permute_cmd = sub.add_parser("permute-test", help="Retrain on shuffled pattern orders")
    _add_data(permute_cmd)
    permute_cmd.add_argument("--trials", type=int, default=config.DEFAULT_TRIALS)
    permute_cmd.add_argument("--model", choices=["waveshape", "baseline"], default="waveshape")
    _add_grouping(permute_cmd)
    _add_lms(permute_cmd)
    _add_common(permute_cmd)
    permute_cmd.set_defaults(handler=cmd_permute_test)

    generate_cmd = sub.add_parser("generate", help="Write a seeded synthetic dataset as CSV")
    generate_cmd.add_argument("--arity", type=int, required=True)
    generate_cmd.add_argument("--patterns", type=int, required=True)
    generate_cmd.add_argument("--generator", choices=["random_linear", "random_uniform"], default="random_linear")
    generate_cmd.add_argument("--coef-low", type=float, default=-1.0)
    generate_cmd.add_argument("--coef-high", type=float, default=1.0)
    generate_cmd.add_argument("--input-low", type=float, default=-1.0)
    generate_cmd.add_argument("--input-high", type=float, default=1.0)
    generate_cmd.add_argument("--noise-sd", type=float, default=0.0)
    generate_cmd.add_argument("--seed", type=int, default=0)
    generate_cmd.add_argument("--out", default=None, help="Write CSV here instead of stdout")
    _add_common(generate_cmd)
    generate_cmd.set_defaults(handler=cmd_generate)

    return parser


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def main(argv: Optional[List[str]] = None) -> int:
    """Run one command; returns the process exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    config.configure_logging("DEBUG" if args.verbose else None)
    handler: Callable[[argparse.Namespace, List[str]], int] = args.handler
    try:
        return handler(args, argv)
    except (DataError, ArityError, ShapeError, OSError) as e:
        return _fail(EXIT_DATA, str(e))
    except DivergenceError as e:
        return _fail(EXIT_NUMERIC, str(e))
    except (ValidationError, GroupingError, ValueError) as e:
        return _fail(EXIT_USAGE, str(e))
