"""Descriptive tables over an analyzed corpus.

One row per metric × modality × attribute count, plus a pooled row per
metric × modality computed over the union of observations (never as a mean
of cell means, which would drift whenever cells are unbalanced).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt
from typing import Iterable, Mapping

METRICS = (
    "duration_sec",
    "char_length",
    "sentence_count",
    "informativeness",
    "naturalness",
    "phrasing",
)

POOLED = "all"


def count_sentences(text: str) -> int:
    """Number of sentences: maximal non-empty segments terminated by '.'.

    A trailing unterminated segment counts as one sentence.  The full stop is
    the only sentence-final punctuation the character validator lets through,
    so nothing else needs handling.
    """
    return sum(1 for seg in text.split(".") if seg.strip())


@dataclass(frozen=True)
class CellStats:
    mean: float
    stdev: float | None  # None when a single observation leaves it undefined
    n: int


@dataclass(frozen=True)
class DescriptiveReport:
    # (metric, modality, attr_count-or-"all") -> CellStats
    cells: Mapping[tuple[str, str, object], CellStats]
    modalities: tuple[str, ...]
    attr_counts: tuple[int, ...]

    def cell(self, metric: str, modality: str, attr_count: object = POOLED) -> CellStats | None:
        return self.cells.get((metric, modality, attr_count))

    def to_dict(self) -> dict:
        out: dict = {}
        for (metric, modality, attr), stats in self.cells.items():
            out.setdefault(metric, {}).setdefault(modality, {})[str(attr)] = {
                "mean": stats.mean,
                "stdev": stats.stdev,
                "n": stats.n,
            }
        return out


def _summary(values: list[float]) -> CellStats:
    n = len(values)
    mean = sum(values) / n
    if n < 2:
        return CellStats(mean=mean, stdev=None, n=n)
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return CellStats(mean=mean, stdev=sqrt(var), n=n)


def descriptive_stats(
    records: Iterable[Mapping], metrics: tuple[str, ...] = METRICS
) -> DescriptiveReport:
    """Summarize records carrying ``modality``, ``attr_count`` and metrics.

    A record may omit a metric (value missing or None); it simply does not
    contribute to that metric's cells.
    """
    groups: dict[tuple[str, str, object], list[float]] = {}
    modalities: list[str] = []
    attr_counts: list[int] = []
    any_row = False
    for rec in records:
        any_row = True
        modality = rec["modality"]
        attr_count = rec["attr_count"]
        if modality not in modalities:
            modalities.append(modality)
        if attr_count not in attr_counts:
            attr_counts.append(attr_count)
        for metric in metrics:
            value = rec.get(metric)
            if value is None:
                continue
            groups.setdefault((metric, modality, attr_count), []).append(float(value))
            groups.setdefault((metric, modality, POOLED), []).append(float(value))
    if not any_row:
        raise ValueError("empty corpus")

    cells = {key: _summary(values) for key, values in groups.items()}
    return DescriptiveReport(
        cells=cells,
        modalities=tuple(sorted(modalities)),
        attr_counts=tuple(sorted(attr_counts)),
    )


def render_descriptive_text(
    report: DescriptiveReport, metrics: Iterable[str] | None = None
) -> str:
    """Aligned plain-text table: metrics as row blocks, modalities as columns."""
    if metrics is None:
        seen = []
        for metric, _, _ in report.cells:
            if metric not in seen:
                seen.append(metric)
        metrics = [m for m in METRICS if m in seen] + [m for m in seen if m not in METRICS]
    modalities = report.modalities
    header = [""]
    for m in modalities:
        header += [f"{m} mean", f"{m} stdev", f"{m} n"]
    rows: list[list[str]] = [header]

    def fmt(stats: CellStats | None) -> list[str]:
        if stats is None:
            return ["-", "-", "-"]
        stdev = "-" if stats.stdev is None else f"{stats.stdev:.2f}"
        return [f"{stats.mean:.2f}", stdev, str(stats.n)]

    for metric in metrics:
        pooled_row = [metric]
        for m in modalities:
            pooled_row += fmt(report.cell(metric, m, POOLED))
        if all(v == "-" for v in pooled_row[1:]):
            continue
        rows.append(pooled_row)
        for attr in report.attr_counts:
            row = [f"  {attr} attributes"]
            for m in modalities:
                row += fmt(report.cell(metric, m, attr))
            rows.append(row)

    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    lines = []
    for r in rows:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"
