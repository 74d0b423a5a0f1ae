"""Command-line pipeline: ingest -> co-occurrence -> mining -> report.

Subcommands:
  analyze   run the full pipeline and write the report (plus optional chart CSV)
  convert   turn any supported input format into the native TSV format
  stats     print per-label document frequencies

Every knob can come from a flat JSON config file (``--config``); a flag given
on the command line wins over the config file. The pipeline is seed-free, so
identical inputs and configuration produce byte-identical outputs.

Exit codes: 0 success, 2 input parse/validation failure, 3 empty dataset,
4 invalid configuration.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Sequence

from cooccur.errors import (
    ConsistencyError,
    DegenerateInputError,
    FormatError,
    IntegrityError,
    ParseError,
    RangeError,
    SizeLimitError,
    UsageError,
    VocabularyError,
)
from cooccur.ingest import (
    LabelVocabulary,
    TransactionSet,
    parse_coco,
    parse_detections_jsonl,
    parse_transactions_tsv,
    parse_voc,
    write_transactions_tsv,
)
from cooccur.mining import (
    AssociationRule,
    Itemset,
    MiningConfig,
    base_class_rules,
    build_fp_tree,
    fp_growth,
    rules_from_itemsets,
)
from cooccur.report import (
    CooccurrenceReport,
    build_report,
    render,
    render_chart_csv,
)
from cooccur.stats import (
    BaseClassPolicy,
    CooccurrenceThreshold,
    FrequencyTable,
    build_matrix,
    count_frequencies,
    select_base_classes,
)

INPUT_FORMATS = ("coco", "voc", "detections", "tsv")
REPORT_FORMATS = ("tsv", "json", "markdown")
METRICS = ("conditional", "support")


@dataclass
class RunConfig:
    """Effective configuration of one run; defaults mirror the CLI flags."""

    input: tuple[str, ...] = ()
    format: str = ""
    score_threshold: float = 0.5
    base_top_k: int | None = None
    base_min_fraction: float | None = None
    cooccur_threshold: float = 0.5
    cooccur_metric: str = "conditional"
    min_support: float = 0.01
    min_confidence: float = 0.5
    max_itemset_size: int | None = None
    vocab: str | None = None
    output: str | None = None
    output_format: str = "tsv"
    chart_out: str | None = None
    expect_classes: int | None = None

    def validate(self):
        if not self.input:
            raise UsageError("no input path given")
        if self.format not in INPUT_FORMATS:
            raise UsageError(
                f"unknown input format {self.format!r}; "
                f"expected one of {', '.join(INPUT_FORMATS)}"
            )
        if self.format != "voc" and len(self.input) != 1:
            raise UsageError(f"format {self.format!r} takes exactly one input path")
        if self.format == "detections" and not self.vocab:
            raise UsageError("detections input needs --vocab (one label per line)")
        if not 0.0 <= self.score_threshold <= 1.0:
            raise UsageError("score threshold must be in [0, 1]")
        if not 0.0 <= self.cooccur_threshold <= 1.0:
            raise UsageError("co-occurrence threshold must be in [0, 1]")
        if self.cooccur_metric not in METRICS:
            raise UsageError(f"unknown co-occurrence metric {self.cooccur_metric!r}")
        if not 0.0 < self.min_support <= 1.0:
            raise UsageError("min support fraction must be in (0, 1]")
        if not 0.0 <= self.min_confidence <= 1.0:
            raise UsageError("min confidence must be in [0, 1]")
        if self.output_format not in REPORT_FORMATS:
            raise UsageError(f"unknown report format {self.output_format!r}")
        if self.base_top_k is not None and self.base_min_fraction is not None:
            raise UsageError("--base-top-k and --base-min-fraction are exclusive")
        if self.expect_classes is not None and self.expect_classes < 1:
            raise UsageError("--expect-classes must be >= 1")
        self.base_policy()  # raises UsageError on bad values

    def base_policy(self) -> BaseClassPolicy:
        if self.base_min_fraction is not None:
            return BaseClassPolicy.min_fraction(self.base_min_fraction)
        return BaseClassPolicy.top_k(self.base_top_k if self.base_top_k else 10)


@dataclass
class AnalysisResult:
    """Everything cmd_analyze computes, for library callers and tests."""

    transactions: TransactionSet
    frequencies: FrequencyTable
    bases: list[int]
    report: CooccurrenceReport
    itemsets: list[Itemset]
    rules: list[AssociationRule]
    base_rules: list[AssociationRule]

    @property
    def summary(self) -> str:
        return (
            f"images={self.transactions.image_count} "
            f"labels={len(self.transactions.vocabulary)} "
            f"bases={len(self.bases)} rows={len(self.report.rows)}"
        )


def read_vocab_file(path: str) -> LabelVocabulary:
    """Read a closed vocabulary, one label name per line, blanks ignored."""
    names = [
        line.strip() for line in _read_text(path).splitlines() if line.strip()
    ]
    return LabelVocabulary(names)


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _write_text(path: str, text: str):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _voc_documents(paths: Sequence[str]) -> list[tuple[str, str]]:
    docs = []
    for raw in paths:
        p = Path(raw)
        if p.is_dir():
            files = sorted(p.glob("*.xml"))
            if not files:
                raise ParseError(f"no .xml files in directory {raw}")
        else:
            files = [p]
        for f in files:
            docs.append((f.stem, _read_text(str(f))))
    return docs


def load_transactions(cfg: RunConfig) -> TransactionSet:
    """Ingest per the configured format, then apply the --expect-classes check."""
    if cfg.format == "coco":
        tset = parse_coco(_read_text(cfg.input[0]))
    elif cfg.format == "voc":
        tset = parse_voc(_voc_documents(cfg.input))
    elif cfg.format == "detections":
        vocabulary = read_vocab_file(cfg.vocab)
        tset = parse_detections_jsonl(
            _read_text(cfg.input[0]), vocabulary, cfg.score_threshold
        )
    else:
        tset = parse_transactions_tsv(_read_text(cfg.input[0]))
    if cfg.expect_classes is not None and len(tset.vocabulary) != cfg.expect_classes:
        raise FormatError(
            f"expected {cfg.expect_classes} classes, found {len(tset.vocabulary)}"
        )
    return tset


def run_analysis(cfg: RunConfig) -> AnalysisResult:
    """The full pipeline on one dataset, without any file output."""
    tset = load_transactions(cfg)
    if tset.image_count == 0:
        raise DegenerateInputError("empty dataset: 0 images")
    table = count_frequencies(tset)
    matrix = build_matrix(tset)
    bases = select_base_classes(table, cfg.base_policy())
    if not bases:
        raise DegenerateInputError("empty dataset: no label occurs in any image")

    mining = MiningConfig(cfg.min_support, cfg.min_confidence, cfg.max_itemset_size)
    support_count = mining.min_support_count(tset.image_count)
    tree = build_fp_tree(tset, support_count)
    itemsets = fp_growth(tree, support_count, mining.max_itemset_size)
    rules = rules_from_itemsets(itemsets, cfg.min_confidence)
    base_rules = base_class_rules(rules, bases)

    meta = {
        "dataset": ",".join(cfg.input),
        "format": cfg.format,
        "score_threshold": cfg.score_threshold,
        "base_policy": (
            f"min_fraction={cfg.base_min_fraction}"
            if cfg.base_min_fraction is not None
            else f"top_k={cfg.base_top_k if cfg.base_top_k else 10}"
        ),
        "min_support": cfg.min_support,
        "min_support_count": support_count,
        "min_confidence": cfg.min_confidence,
        "frequent_itemsets": len(itemsets),
        "rules": len(rules),
        "base_class_rules": len(base_rules),
    }
    report = build_report(
        matrix,
        table,
        bases,
        CooccurrenceThreshold(cfg.cooccur_threshold),
        tset.vocabulary,
        meta=meta,
        metric=cfg.cooccur_metric,
    )
    return AnalysisResult(tset, table, bases, report, itemsets, rules, base_rules)


def cmd_analyze(cfg: RunConfig) -> int:
    cfg.validate()
    result = run_analysis(cfg)
    text = render(result.report, cfg.output_format)
    chart = render_chart_csv(result.report) if cfg.chart_out else None
    if cfg.output:
        _write_text(cfg.output, text)
    else:
        sys.stdout.write(text)
    if chart is not None:
        _write_text(cfg.chart_out, chart)
    print(result.summary)
    return 0


def cmd_convert(cfg: RunConfig) -> int:
    cfg.validate()
    text = write_transactions_tsv(load_transactions(cfg))
    if cfg.output:
        _write_text(cfg.output, text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_stats(cfg: RunConfig) -> int:
    cfg.validate()
    tset = load_transactions(cfg)
    if tset.image_count == 0:
        raise DegenerateInputError("empty dataset: 0 images")
    table = count_frequencies(tset)
    names = tset.vocabulary.names
    order = sorted(range(len(names)), key=lambda i: (-int(table.counts[i]), names[i]))
    for i in order:
        print(f"{names[i]}\t{int(table.counts[i])}")
    print(f"images\t{table.n_images}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cooccur",
        description="Co-occurrence statistics and frequent-pattern mining "
        "for multilabel object datasets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_input_flags(p):
        p.add_argument("--config", help="flat JSON config file; flags override it")
        p.add_argument(
            "--input",
            nargs="+",
            help="input path(s); voc accepts files or a directory of .xml",
        )
        p.add_argument("--format", choices=INPUT_FORMATS, help="input format")
        p.add_argument(
            "--score-threshold",
            type=float,
            help="drop detections scoring below this (detections format)",
        )
        p.add_argument(
            "--vocab", help="label-name file, one per line (detections format)"
        )
        p.add_argument(
            "--expect-classes",
            type=int,
            help="fail unless the vocabulary has exactly this many classes",
        )

    analyze = sub.add_parser("analyze", help="run the full pipeline")
    add_input_flags(analyze)
    analyze.add_argument("--base-top-k", type=int, help="use the k most frequent labels as bases")
    analyze.add_argument(
        "--base-min-fraction",
        type=float,
        help="use labels present in at least this fraction of images as bases",
    )
    analyze.add_argument(
        "--cooccur-threshold",
        type=float,
        help="minimum conditional probability for a co-occurring class",
    )
    analyze.add_argument(
        "--cooccur-metric",
        choices=METRICS,
        help="apply the threshold to P(co|base) or to pair support",
    )
    analyze.add_argument("--min-support", type=float, help="itemset support fraction")
    analyze.add_argument("--min-confidence", type=float, help="rule confidence floor")
    analyze.add_argument(
        "--max-itemset-size", type=int, help="cap on mined itemset size"
    )
    analyze.add_argument("--output", help="report path (stdout when omitted)")
    analyze.add_argument(
        "--output-format", choices=REPORT_FORMATS, help="report format"
    )
    analyze.add_argument("--chart-out", help="per-base co-class count CSV path")
    analyze.set_defaults(func=cmd_analyze)

    convert = sub.add_parser("convert", help="convert input to native TSV")
    add_input_flags(convert)
    convert.add_argument("--output", help="TSV path (stdout when omitted)")
    convert.set_defaults(func=cmd_convert)

    stats = sub.add_parser("stats", help="print per-label document frequencies")
    add_input_flags(stats)
    stats.set_defaults(func=cmd_stats)

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    values: dict = {}
    if args.config:
        try:
            loaded = json.loads(_read_text(args.config))
        except json.JSONDecodeError as exc:
            raise UsageError(f"config file {args.config}: invalid JSON: {exc}") from exc
        if not isinstance(loaded, dict):
            raise UsageError("config file must hold a JSON object")
        known = {f.name for f in fields(RunConfig)}
        for key, value in loaded.items():
            if key not in known:
                raise UsageError(f"config file: unknown key {key!r}")
            values[key] = value
    for f in fields(RunConfig):
        flag_value = getattr(args, f.name, None)
        if flag_value is not None:
            values[f.name] = flag_value
    if "input" in values:
        raw = values["input"]
        values["input"] = (raw,) if isinstance(raw, str) else tuple(raw)
    try:
        return RunConfig(**values)
    except TypeError as exc:
        raise UsageError(f"bad configuration: {exc}") from exc


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        return args.func(cfg)
    except (ParseError, FormatError, VocabularyError, IntegrityError, RangeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DegenerateInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (UsageError, ConsistencyError, SizeLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
