"""Command-line front end wiring the pipeline stages together.

Subcommands: ingest, preprocess, stats, mine, train, predict, evaluate,
demographics. Stages communicate through files (raw/unified JSON Lines,
JSON models, CSV tables). Exit codes: 0 success, 1 usage error, 2 data
error. Diagnostics go to stderr; data goes to files or stdout.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from pathlib import Path

from . import apriori, classify, demographics, evaluate, ingestion, preprocess, stats
from .errors import CrimeMinerError
from .ingestion import Schema
from .preprocess import MONTH_NAMES, WEEKDAY_NAMES, TimeBin

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); route to exit code 1
        raise UsageError(message)


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="JSON file supplying defaults for any flag of this subcommand")
    sub.add_argument("--seed", type=int, default=42, help="seed for all randomized steps")
    sub.add_argument("--threads", type=int, default=1,
                     help="worker threads for mining / cross-validation (results are identical for any value)")
    sub.add_argument("--output", help="output path ('-' or omitted = stdout unless noted)")


def build_parser() -> tuple[_Parser, dict[str, argparse.ArgumentParser]]:
    parser = _Parser(prog="crimeminer", description=__doc__)
    subparsers = parser.add_subparsers(dest="command", required=True)
    commands: dict[str, argparse.ArgumentParser] = {}

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        sub = subparsers.add_parser(name, help=help_text)
        _add_common(sub)
        commands[name] = sub
        return sub

    sub = command("ingest", "load a city crime CSV into cleaned raw records")
    sub.add_argument("--schema", required=True, help="denver or la")
    sub.add_argument("--input", required=True, help="crime CSV path")
    sub.add_argument("--report", help="write the ingest report JSON here")
    sub.add_argument("--exclude", action="append", default=[],
                     help="offense category to drop for the LA feed (repeatable)")
    sub.add_argument("--no-filter", action="store_true", help="skip the crime/non-crime filter")
    sub.set_defaults(handler=_cmd_ingest)

    sub = command("preprocess", "transform raw records into the unified dataset")
    sub.add_argument("--schema", required=True, help="denver or la")
    sub.add_argument("--input", required=True, help="raw-records JSONL path")
    sub.add_argument("--mapping", help="type-mapping JSON (default: packaged mapping for the schema)")
    sub.add_argument("--report", help="write the preprocess report JSON here")
    sub.add_argument("--max-reject-fraction", type=float, default=0.01,
                     help="abort when more than this fraction of rows is rejected")
    sub.set_defaults(handler=_cmd_preprocess)

    sub = command("stats", "frequency tables, crosstabs, and location rankings")
    sub.add_argument("--dataset", required=True, help="unified dataset JSONL path")
    sub.add_argument("--year", type=int, help="restrict to one year")
    sub.add_argument("--attribute", help="frequency table over month/day/time/location/type/hour")
    sub.add_argument("--rows", help="crosstab row attribute")
    sub.add_argument("--cols", help="crosstab column attribute")
    sub.add_argument("--top", type=int, help="location ranking: top picks")
    sub.add_argument("--middle", type=int, help="location ranking: centered middle picks")
    sub.add_argument("--bottom", type=int, help="location ranking: bottom picks")
    sub.set_defaults(handler=_cmd_stats)

    sub = command("mine", "mine (location, day, time) hotspot patterns")
    sub.add_argument("--dataset", required=True, help="unified dataset JSONL path")
    sub.add_argument("--min-sup", type=float, help="minimum support as a decimal fraction")
    sub.add_argument("--min-count", type=int,
                     help="minimum absolute count (converted by dividing by the dataset size)")
    sub.add_argument("--summary", help="run summary JSON path (default: alongside the pattern CSV)")
    sub.set_defaults(handler=_cmd_mine, output_default="patterns.csv")

    sub = command("train", "train a crime-type classifier on a seeded split")
    sub.add_argument("--dataset", required=True, help="unified dataset JSONL path")
    sub.add_argument("--model", required=True, choices=["nb", "dt"], help="classifier kind")
    sub.add_argument("--alpha", type=float, default=1.0, help="Bayes smoothing pseudo-count")
    sub.add_argument("--max-leaves", type=int, default=10, help="decision tree leaf cap")
    sub.add_argument("--train-fraction", type=float, default=0.8,
                     help="training share of the seeded split; 1.0 trains on everything")
    sub.add_argument("--eval-report", help="evaluate on the held-out split and write the report JSON here")
    sub.set_defaults(handler=_cmd_train, output_default="model.json")

    sub = command("predict", "predict a crime type for one feature vector")
    sub.add_argument("--model", required=True, help="model JSON path")
    sub.add_argument("--month", required=True)
    sub.add_argument("--day", required=True)
    sub.add_argument("--time", required=True, help="time bin T1..T6")
    sub.add_argument("--location", required=True)
    sub.set_defaults(handler=_cmd_predict)

    sub = command("evaluate", "k-fold cross-validation of a classifier")
    sub.add_argument("--dataset", required=True, help="unified dataset JSONL path")
    sub.add_argument("--model", required=True, choices=["nb", "dt"], help="classifier kind")
    sub.add_argument("--alpha", type=float, default=1.0)
    sub.add_argument("--max-leaves", type=int, default=10)
    sub.add_argument("--folds", type=int, default=5)
    sub.add_argument("--csv", help="also write the per-class metrics table as CSV here")
    sub.set_defaults(handler=_cmd_evaluate)

    sub = command("demographics", "compare dangerous vs. safe neighborhood demographics")
    sub.add_argument("--dataset", required=True, help="unified dataset JSONL path")
    sub.add_argument("--demographics", required=True, help="demographics CSV path")
    sub.add_argument("--columns", help="column-map JSON (default: packaged bindings)")
    sub.add_argument("--top", type=int, default=3, help="dangerous group size")
    sub.add_argument("--bottom", type=int, default=3, help="safe group size")
    sub.add_argument("--per-capita", action="store_true",
                     help="rank by crimes per resident instead of raw counts")
    sub.add_argument("--json", help="also write the comparison as JSON here")
    sub.set_defaults(handler=_cmd_demographics)

    return parser, commands


def _parse(argv: list[str]) -> argparse.Namespace:
    parser, commands = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fp:
            overrides = json.load(fp)
        if not isinstance(overrides, dict):
            raise UsageError(f"config {args.config} must hold a JSON object")
        known = vars(args)
        commands[args.command].set_defaults(
            **{k: v for k, v in overrides.items() if k in known}
        )
        args = parser.parse_args(argv)  # explicit flags still win over config
    return args


@contextlib.contextmanager
def _open_output(path: str | None):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fp:
            yield fp


def _resolved_output(args) -> str | None:
    if args.output:
        return args.output
    return getattr(args, "output_default", None)


# --- handlers -----------------------------------------------------------------

def _cmd_ingest(args) -> None:
    schema = Schema.parse(args.schema)
    records, report = ingestion.load_crime_csv(args.input, schema)
    if not args.no_filter:
        records = ingestion.filter_crimes(records, schema, args.exclude)
    with _open_output(args.output) as fp:
        ingestion.write_raw_jsonl(records, fp)
    if args.report:
        with open(args.report, "w", encoding="utf-8", newline="") as fp:
            report.write_json(fp)


def _cmd_preprocess(args) -> None:
    schema = Schema.parse(args.schema)
    with open(args.input, encoding="utf-8") as fp:
        records = ingestion.read_raw_jsonl(fp)
    if args.mapping:
        mapping = preprocess.TypeMapping.from_json_file(args.mapping)
    else:
        mapping = preprocess.TypeMapping.for_schema(schema)
    unified, report = preprocess.preprocess_dataset(
        records, schema, mapping, max_reject_fraction=args.max_reject_fraction
    )
    with _open_output(args.output) as fp:
        preprocess.write_unified_jsonl(unified, fp)
    if args.report:
        with open(args.report, "w", encoding="utf-8", newline="") as fp:
            report.write_json(fp)


def _read_dataset(path):
    with open(path, encoding="utf-8") as fp:
        return preprocess.read_unified_jsonl(fp)


def _cmd_stats(args) -> None:
    wants_freq = args.attribute is not None
    wants_crosstab = args.rows is not None or args.cols is not None
    wants_locations = any(v is not None for v in (args.top, args.middle, args.bottom))
    if sum([wants_freq, wants_crosstab, wants_locations]) != 1:
        raise UsageError(
            "pick exactly one mode: --attribute, --rows/--cols, or --top/--middle/--bottom"
        )
    dataset = _read_dataset(args.dataset)
    if wants_freq:
        table = stats.frequency_table(dataset, args.attribute, args.year)
        with _open_output(args.output) as fp:
            stats.write_frequency_csv(table, fp)
    elif wants_crosstab:
        if args.rows is None or args.cols is None:
            raise UsageError("crosstab needs both --rows and --cols")
        table = stats.crosstab(dataset, args.rows, args.cols, args.year)
        with _open_output(args.output) as fp:
            stats.write_crosstab_csv(table, fp)
    else:
        if None in (args.top, args.middle, args.bottom):
            raise UsageError("location ranking needs --top, --middle, and --bottom")
        if args.year is not None:
            raise UsageError("--year does not apply to the location ranking")
        table = stats.top_and_bottom_locations(dataset, args.top, args.bottom, args.middle)
        with _open_output(args.output) as fp:
            stats.write_frequency_csv(table, fp)


def _cmd_mine(args) -> None:
    if (args.min_sup is None) == (args.min_count is None):
        raise UsageError("give exactly one of --min-sup or --min-count")
    dataset = _read_dataset(args.dataset)
    if args.min_count is not None:
        if not dataset:
            raise UsageError("--min-count needs a nonempty dataset")
        min_sup = args.min_count / len(dataset)
    else:
        min_sup = args.min_sup
    run = apriori.mine_hotspot_patterns(dataset, min_sup, threads=args.threads)
    output = _resolved_output(args)
    with _open_output(output) as fp:
        apriori.write_patterns_csv(run, fp)
    summary_path = args.summary
    if summary_path is None and output not in (None, "-"):
        summary_path = str(Path(output).with_suffix(".summary.json"))
    if summary_path:
        with open(summary_path, "w", encoding="utf-8", newline="") as fp:
            json.dump(apriori.run_summary_dict(run), fp, indent=2, sort_keys=True)
            fp.write("\n")


def _cmd_train(args) -> None:
    dataset = _read_dataset(args.dataset)
    if args.train_fraction == 1.0:
        train, test = list(dataset), []
    else:
        spec = classify.SplitSpec(train_fraction=args.train_fraction, seed=args.seed)
        train, test = classify.split_train_test(dataset, spec)
    if args.model == "nb":
        model = classify.nb_train(train, alpha=args.alpha)
    else:
        model = classify.dt_train(train, max_leaves=args.max_leaves)
    with _open_output(_resolved_output(args)) as fp:
        classify.save_model(model, fp)
    if args.eval_report:
        if not test:
            raise UsageError("--eval-report needs --train-fraction < 1.0")
        report = evaluate.evaluate_split(
            train, test, args.model, alpha=args.alpha, max_leaves=args.max_leaves
        )
        with open(args.eval_report, "w", encoding="utf-8", newline="") as fp:
            evaluate.write_report_json(report, fp)


def _match_name(text: str, names: tuple[str, ...], what: str) -> str:
    lowered = text.strip().lower()
    for name in names:
        if name.lower() == lowered:
            return name
    raise UsageError(f"unknown {what} {text!r}; expected one of {', '.join(names)}")


def _cmd_predict(args) -> None:
    with open(args.model, encoding="utf-8") as fp:
        model = classify.load_model(fp)
    try:
        time_bin = TimeBin(args.time.strip().upper())
    except ValueError:
        raise UsageError(f"unknown time bin {args.time!r}; expected T1..T6") from None
    vector = classify.FeatureVector(
        month=_match_name(args.month, MONTH_NAMES, "month"),
        day=_match_name(args.day, WEEKDAY_NAMES, "weekday"),
        time=time_bin,
        location=ingestion.normalize_location(args.location),
    )
    if isinstance(model, classify.NaiveBayesModel):
        predicted, posterior = classify.nb_predict(model, vector)
        result = {
            "class_id": int(predicted),
            "class_name": predicted.label,
            "posterior": {c.label: p for c, p in posterior.items()},
        }
    else:
        predicted = classify.dt_predict(model, vector)
        result = {"class_id": int(predicted), "class_name": predicted.label}
    with _open_output(args.output) as fp:
        json.dump(result, fp, indent=2, sort_keys=True)
        fp.write("\n")


def _cmd_evaluate(args) -> None:
    dataset = _read_dataset(args.dataset)
    result = evaluate.cross_validate(
        dataset,
        args.model,
        k=args.folds,
        seed=args.seed,
        alpha=args.alpha,
        max_leaves=args.max_leaves,
        threads=args.threads,
    )
    with _open_output(args.output) as fp:
        evaluate.write_cv_result_json(result, fp)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fp:
            evaluate.write_report_csv(result.report, fp)


def _cmd_demographics(args) -> None:
    dataset = _read_dataset(args.dataset)
    columns = (
        ingestion.DemographicsColumns.from_json_file(args.columns)
        if args.columns
        else ingestion.DemographicsColumns.default()
    )
    records, _report = ingestion.load_demographics_csv(args.demographics, columns)
    rates = demographics.crime_rate_by_location(dataset)
    comparison = demographics.compare_groups(
        rates, records, args.top, args.bottom, per_capita=args.per_capita
    )
    with _open_output(args.output) as fp:
        demographics.write_comparison_csv(comparison, fp)
    if args.json:
        with open(args.json, "w", encoding="utf-8", newline="") as fp:
            demographics.write_comparison_json(comparison, fp)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    try:
        args = _parse(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args.handler(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CrimeMinerError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
