"""Command line front-end: ``mine``, ``classify`` and ``validate``.

Exit codes: 0 ok, 1 usage/config, 2 parse, 3 semantic, 4 unresolved
uncertainty under ``--strict``.  Every failure prints one ``error:`` line.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass

from .approximation import run_imputation_pipeline
from .dataset import (
    Table,
    attribute_regions,
    fuzzify_dataset,
    load_prefuzzified_table,
    load_table,
    partition_by_class,
    write_table,
)
from .errors import ConfigError, FuzzyVPRSError, NoMatch, UnresolvedUncertainty
from .membership import MembershipFunctionSet, load_mf_config, validate_mf_set
from .partitions import format_class
from .rules import classify, format_rules_csv, format_rules_text, mine_rules, parse_rules_csv, validate_beta


class UsageError(ConfigError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    data: str
    mf: str | None
    beta: float
    prefuzzified: bool = False
    class_column: str | None = None
    rules_out: str | None = None
    rules_csv_out: str | None = None
    imputed_out: str | None = None
    imputation_log: str | None = None
    dump_classes: str | None = None
    strict: bool = False
    possible_against_certain: bool = False


def _load(data, mf, prefuzzified, class_column, require_class=True):
    mfs = load_mf_config(mf) if mf else None
    if prefuzzified:
        table = load_prefuzzified_table(data, class_column, require_class)
        objects = list(table.objects)
    else:
        if mfs is None:
            raise UsageError("--mf is required for raw quantitative data")
        table = load_table(data, class_column, require_class)
        _check_mfs(mfs, table)
        objects = fuzzify_dataset(table.objects, mfs)
    if prefuzzified and mfs is not None:
        _check_mfs(mfs, table)
    return table, objects, mfs


def _check_mfs(mfs: MembershipFunctionSet, table: Table):
    report = validate_mf_set(mfs, table.attributes)
    if report:
        raise ConfigError("membership functions invalid: " + "; ".join(report))


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def cmd_mine(config: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    beta = validate_beta(config.beta)
    table, objects, mfs = _load(config.data, config.mf, config.prefuzzified, config.class_column)
    if mfs is None and any(o.missing_attributes() for o in objects):
        raise UsageError("incomplete pre-fuzzified data needs --mf for imputation")

    result = run_imputation_pipeline(objects, partition_by_class(objects), mfs,
                                     attribute_regions(objects, mfs))
    if result.unresolved:
        exc = UnresolvedUncertainty(result.unresolved)
        if config.strict:
            raise exc
        print(f"warning: {exc}", file=stderr)

    rules = mine_rules(result.objects, result.partitions, result.regions, beta,
                       possible_against_certain=config.possible_against_certain)

    text = format_rules_text(rules, table.class_name)
    if config.rules_out:
        _write(config.rules_out, text)
    if config.rules_csv_out:
        _write(config.rules_csv_out, format_rules_csv(rules))
    if not config.rules_out and not config.rules_csv_out:
        stdout.write(text)
    if config.imputed_out:
        with open(config.imputed_out, "w", encoding="utf-8", newline="") as fh:
            write_table(result.objects, table.attributes, table.class_name, fh,
                        prefuzzified=config.prefuzzified)
    if config.imputation_log:
        _write(config.imputation_log, "".join(r.log_line() + "\n" for r in result.records))
    if config.dump_classes:
        _write(config.dump_classes,
               "".join(format_class(eq) + "\n" for classes in result.classes.values() for eq in classes))
    return 0


def cmd_classify(rules_path, data, mf=None, prefuzzified=False, class_column=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    with open(rules_path, encoding="utf-8", newline="") as fh:
        rules = parse_rules_csv(fh.read())
    if not rules:
        raise UsageError(f"no rules in {rules_path}")
    _, objects, _ = _load(data, mf, prefuzzified, class_column, require_class=False)
    stdout.write("object_id,predicted_class,score\n")
    for obj in objects:
        try:
            label, score = classify(obj, rules)
            stdout.write(f"{obj.id},{label},{score:.6f}\n")
        except NoMatch:
            stdout.write(f"{obj.id},?,{0.0:.6f}\n")
    return 0


def cmd_validate(data, mf, prefuzzified=False, class_column=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    mfs = load_mf_config(mf)
    loader = load_prefuzzified_table if prefuzzified else load_table
    table = loader(data, class_column)
    report = validate_mf_set(mfs, table.attributes)
    if prefuzzified and not report:
        try:
            attribute_regions(list(table.objects), mfs)
        except FuzzyVPRSError as exc:
            report.append(str(exc))
    for line in report:
        stdout.write(line + "\n")
    if report:
        raise ConfigError(f"{len(report)} problem(s) found")
    stdout.write("ok\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fuzzyvprs", description="Mine fuzzy beta-certain and beta-possible rules "
                                                   "from incomplete quantitative data.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log imputation steps")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def data_args(p, mf_required=False):
        p.add_argument("--data", required=True, help="dataset CSV")
        p.add_argument("--mf", required=mf_required, help="membership-function config")
        p.add_argument("--prefuzzified", action="store_true", help="cells hold region:degree fuzzy sets")
        p.add_argument("--class-column", help="class column name (default: last column)")

    mine = sub.add_parser("mine", help="impute missing values and mine rules")
    data_args(mine)
    mine.add_argument("--beta", type=float, required=True, help="misclassification tolerance in [0, 0.5)")
    mine.add_argument("--rules-out", help="write rules in text form")
    mine.add_argument("--rules-csv-out", help="write rules as CSV")
    mine.add_argument("--imputed-out", help="write the completed dataset")
    mine.add_argument("--imputation-log", help="write one line per estimated value")
    mine.add_argument("--dump-classes", help="write final equivalence classes")
    mine.add_argument("--strict", action="store_true", help="fail if values remain unknown")
    mine.add_argument("--possible-against-certain", action="store_true",
                      help="let certain rules also prune more specific possible rules")

    cls = sub.add_parser("classify", help="classify objects with a rules CSV")
    cls.add_argument("--rules", required=True, help="rules CSV written by 'mine'")
    data_args(cls)

    val = sub.add_parser("validate", help="lint a membership-function config against a dataset")
    data_args(val, mf_required=True)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.ERROR,
                            format="%(levelname)s: %(message)s")
        if args.command == "mine":
            return cmd_mine(RunConfig(
                data=args.data, mf=args.mf, beta=args.beta, prefuzzified=args.prefuzzified,
                class_column=args.class_column, rules_out=args.rules_out,
                rules_csv_out=args.rules_csv_out, imputed_out=args.imputed_out,
                imputation_log=args.imputation_log, dump_classes=args.dump_classes,
                strict=args.strict, possible_against_certain=args.possible_against_certain,
            ))
        if args.command == "classify":
            return cmd_classify(args.rules, args.data, args.mf, args.prefuzzified, args.class_column)
        return cmd_validate(args.data, args.mf, args.prefuzzified, args.class_column)
    except FuzzyVPRSError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
