"""Assembly and deterministic rendering of the base-class co-occurrence table."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Sequence

from cooccur.errors import UsageError
from cooccur.ingest import LabelVocabulary
from cooccur.stats import (
    CooccurrenceMatrix,
    CooccurrenceThreshold,
    FrequencyTable,
    cooccurring_for_base,
)

_COLUMNS = ("base", "co_label", "pair_count", "base_count", "cond_prob", "support")


@dataclass(frozen=True)
class ReportRow:
    """One base-class / co-occurring-class pairing with its exact counts."""

    base_label: str
    co_label: str
    pair_count: int
    base_count: int
    conditional_probability: float
    support_fraction: float


@dataclass(frozen=True)
class CooccurrenceReport:
    """The final table.

    Rows are sorted by (base frequency desc, base name asc, conditional
    probability desc, co name asc). ``base_labels`` lists every base in that
    order, including bases whose candidate rows were all filtered out, so
    per-base counts stay comparable across runs.
    """

    meta: dict
    rows: tuple[ReportRow, ...]
    base_labels: tuple[str, ...]


def build_report(
    matrix: CooccurrenceMatrix,
    table: FrequencyTable,
    bases: Sequence[int],
    threshold: CooccurrenceThreshold | float,
    vocab: LabelVocabulary,
    *,
    meta: dict | None = None,
    metric: str = "conditional",
) -> CooccurrenceReport:
    """Collect, for every base class, its co-occurring classes above threshold."""
    bases = list(bases)
    if not bases:
        raise UsageError("at least one base class is required")
    thr = (
        threshold
        if isinstance(threshold, CooccurrenceThreshold)
        else CooccurrenceThreshold(float(threshold))
    )
    n = table.n_images
    ordered = sorted(bases, key=lambda b: (-int(table.counts[b]), vocab.name_of(b)))
    rows = []
    for base in ordered:
        base_name = vocab.name_of(base)
        base_freq = matrix.doc_frequency(base)
        for label, pair, prob in cooccurring_for_base(
            matrix, base, thr, metric=metric, n_images=n
        ):
            rows.append(
                ReportRow(
                    base_label=base_name,
                    co_label=vocab.name_of(label),
                    pair_count=pair,
                    base_count=base_freq,
                    conditional_probability=prob,
                    support_fraction=pair / n,
                )
            )
    rows.sort(key=lambda r: (-r.base_count, r.base_label, -r.pair_count, r.co_label))
    info = dict(meta or {})
    info.update(
        n_images=n,
        threshold=thr.t,
        metric=metric,
        bases=[vocab.name_of(b) for b in ordered],
    )
    return CooccurrenceReport(
        meta=info,
        rows=tuple(rows),
        base_labels=tuple(vocab.name_of(b) for b in ordered),
    )


def ratio_4dp(numerator: int, denominator: int) -> str:
    """Exact 4-decimal rendering of a non-negative rational, half-even ties.

    Works in integer arithmetic so boundary cases round identically no matter
    how the ratio would land in binary floating point.
    """
    scaled, remainder = divmod(numerator * 10000, denominator)
    if 2 * remainder > denominator or (
        2 * remainder == denominator and scaled % 2 == 1
    ):
        scaled += 1
    return f"{scaled // 10000}.{scaled % 10000:04d}"


def _row_strings(row: ReportRow) -> tuple[str, str]:
    cond = ratio_4dp(row.pair_count, row.base_count)
    support = f"{row.support_fraction:.4f}"
    return cond, support


def render(report: CooccurrenceReport, format: str = "tsv") -> str:
    """Render to one of tsv, json, markdown.

    All formats are byte-deterministic; probabilities are fixed to 4 decimal
    places with half-even rounding. The TSV form carries no metadata, only
    the header and rows.
    """
    if format == "tsv":
        return _render_tsv(report)
    if format == "json":
        return _render_json(report)
    if format == "markdown":
        return _render_markdown(report)
    raise UsageError(f"unknown report format: {format!r}")


def _render_tsv(report: CooccurrenceReport) -> str:
    lines = ["\t".join(_COLUMNS)]
    for r in report.rows:
        cond, support = _row_strings(r)
        lines.append(
            f"{r.base_label}\t{r.co_label}\t{r.pair_count}\t{r.base_count}"
            f"\t{cond}\t{support}"
        )
    return "\n".join(lines) + "\n"


def _render_json(report: CooccurrenceReport) -> str:
    rows = []
    for r in report.rows:
        cond, support = _row_strings(r)
        rows.append(
            {
                "base": r.base_label,
                "co_label": r.co_label,
                "pair_count": r.pair_count,
                "base_count": r.base_count,
                "cond_prob": float(cond),
                "support": float(support),
            }
        )
    return json.dumps({"meta": report.meta, "rows": rows}, indent=2) + "\n"


def _render_markdown(report: CooccurrenceReport) -> str:
    out = []
    for base in report.base_labels:
        out.append(f"## {base}\n\n")
        out.append("| co_label | pair_count | base_count | cond_prob | support |\n")
        out.append("| --- | --- | --- | --- | --- |\n")
        for r in report.rows:
            if r.base_label != base:
                continue
            cond, support = _row_strings(r)
            out.append(
                f"| {r.co_label} | {r.pair_count} | {r.base_count} "
                f"| {cond} | {support} |\n"
            )
        out.append("\n")
    return "".join(out)


def chart_counts(report: CooccurrenceReport) -> list[tuple[str, int]]:
    """Distinct co-occurring class count per base, in report order.

    Bases with no surviving rows stay in the output with count 0.
    """
    per_base: dict[str, set[str]] = {name: set() for name in report.base_labels}
    for r in report.rows:
        per_base[r.base_label].add(r.co_label)
    return [(name, len(per_base[name])) for name in report.base_labels]


def render_chart_csv(report: CooccurrenceReport) -> str:
    """CSV of per-base co-occurring class counts, for external plotting."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["base", "co_class_count"])
    for name, count in chart_counts(report):
        writer.writerow([name, count])
    return buf.getvalue()
