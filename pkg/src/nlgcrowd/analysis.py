"""Corpus analysis: the full statistical report over a collected corpus.

Applies the between-subject filter, derives one analyzed record per kept
utterance, and computes descriptive tables, modality × complexity ANOVAs,
self-vs-crowd agreement, the similarity/informativeness agreement, and the
naturalness/phrasing correlation.  Each section fails independently: a
section that cannot be computed is reported as a problem while the others
still come out.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .schema import MeaningRepresentation
from .similarity import Bucket, bucket_score
from .stats import (
    METRICS,
    AnovaTable,
    ConstantInput,
    DegenerateDesign,
    DescriptiveReport,
    KappaResult,
    ObservationTable,
    PearsonResult,
    cohens_kappa,
    count_sentences,
    descriptive_stats,
    pearson,
    percentage_agreement,
    render_descriptive_text,
    two_way_anova,
)
from .store import Corpus, apply_between_subject_filter

CRITERIA = ("informativeness", "naturalness", "phrasing")


@dataclass
class AnalyzedUtterance:
    utterance_id: str
    worker: str
    modality: str
    attr_count: int
    duration_sec: float
    char_length: int
    sentence_count: int
    crowd_means: dict[str, float] = field(default_factory=dict)
    self_labels: dict[str, str] = field(default_factory=dict)
    similarity_bucket: str | None = None

    def metric_row(self) -> dict:
        row: dict = {
            "modality": self.modality,
            "attr_count": self.attr_count,
            "duration_sec": self.duration_sec,
            "char_length": self.char_length,
            "sentence_count": self.sentence_count,
        }
        for crit in CRITERIA:
            row[crit] = self.crowd_means.get(crit)
        return row


@dataclass
class AnalysisReport:
    descriptive: DescriptiveReport
    anovas: dict[str, AnovaTable] = field(default_factory=dict)
    kappas: dict[str, KappaResult] = field(default_factory=dict)
    agreements: dict[str, float] = field(default_factory=dict)
    pearson_naturalness_phrasing: PearsonResult | None = None
    exclusions: list[tuple[str, int]] = field(default_factory=list)
    counts: dict[str, int] = field(default_factory=dict)
    problems: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "counts": self.counts,
            "exclusions": [{"worker": w, "excluded": n} for w, n in self.exclusions],
            "descriptive": self.descriptive.to_dict(),
            "anovas": {k: v.to_dict() for k, v in self.anovas.items()},
            "kappas": {k: v.to_dict() for k, v in self.kappas.items()},
            "agreements": self.agreements,
            "pearson_naturalness_phrasing": (
                None
                if self.pearson_naturalness_phrasing is None
                else self.pearson_naturalness_phrasing.to_dict()
            ),
            "problems": self.problems,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    def to_text(self) -> str:
        lines = ["Corpus analysis", "==============", ""]
        lines.append(
            "records: "
            + ", ".join(f"{k}={v}" for k, v in sorted(self.counts.items()))
        )
        if self.exclusions:
            dropped = ", ".join(f"{w} (-{n})" for w, n in self.exclusions)
            lines.append(f"between-subject exclusions: {dropped}")
        lines += ["", "Descriptive", "-----------", render_descriptive_text(self.descriptive)]
        lines += ["ANOVA (modality x attribute count)", "----------------------------------"]
        for metric, table in self.anovas.items():
            lines.append(metric)
            for row in table.rows:
                if row.f_stat is None:
                    lines.append(f"  {row.effect:<22} SS={row.sum_sq:<12.4f} df={row.df}")
                else:
                    lines.append(
                        f"  {row.effect:<22} SS={row.sum_sq:<12.4f} df={row.df:<5} "
                        f"F={row.f_stat:.4f} p={row.p_value:.4g}"
                    )
        lines += ["", "Self vs crowd agreement (Cohen's kappa)", "---------------------------------------"]
        for crit, result in self.kappas.items():
            if result.degenerate:
                lines.append(f"  {crit}: degenerate (both raters constant)")
            else:
                lines.append(f"  {crit}: kappa={result.kappa:.4f} p={result.p_value:.4g}")
        lines += ["", "Percentage agreement", "--------------------"]
        for name, value in self.agreements.items():
            lines.append(f"  {name}: {100 * value:.1f}%")
        if self.pearson_naturalness_phrasing is not None:
            r = self.pearson_naturalness_phrasing
            lines += [
                "",
                f"Pearson naturalness~phrasing: r={r.r:.4f} p={r.p_value:.4g} (n={r.n})",
            ]
        if self.problems:
            lines += ["", "Not computed", "------------"]
            for name, reason in sorted(self.problems.items()):
                lines.append(f"  {name}: {reason}")
        return "\n".join(lines) + "\n"


def _crowd_mean(values: list[int]) -> float:
    return sum(values) / len(values)


def analyzed_utterances(
    corpus: Corpus, mrs: dict[str, MeaningRepresentation]
) -> list[AnalyzedUtterance]:
    out = []
    for sub in corpus.submissions:
        mr = mrs[sub.mr_id]
        rec = AnalyzedUtterance(
            utterance_id=sub.utterance_id,
            worker=sub.worker,
            modality=sub.modality,
            attr_count=mr.complexity,
            duration_sec=sub.submitted_at - sub.issued_at,
            char_length=len(sub.text),
            sentence_count=count_sentences(sub.text),
        )
        for crit in CRITERIA:
            crowd = [getattr(r, crit) for r in corpus.ratings_for(sub.utterance_id, "crowd")]
            if crowd:
                rec.crowd_means[crit] = _crowd_mean(crowd)
            selfs = corpus.ratings_for(sub.utterance_id, "self")
            if selfs:
                # A worker self-rates an utterance once; keep the first.
                rec.self_labels[crit] = getattr(selfs[0], crit)
        sim = corpus.similarity_for(sub.utterance_id)
        if sim is not None:
            rec.similarity_bucket = sim.bucket
        out.append(rec)
    return out


def crowd_bucket(mean_rating: float) -> Bucket:
    """Bucket a 1..6 crowd rating with the same thresholds as similarity."""
    return bucket_score(mean_rating)


def build_analysis(
    corpus: Corpus,
    mrs: dict[str, MeaningRepresentation],
    include_self: bool = False,
) -> AnalysisReport:
    filtered, exclusions = apply_between_subject_filter(corpus)
    records = analyzed_utterances(filtered, mrs)
    if not records:
        raise ValueError("no accepted submissions to analyze")

    rows = [r.metric_row() for r in records]
    metrics = METRICS
    if include_self:
        # Self labels become extra descriptive columns only on request; the
        # self-evaluation stream is not a reliable quality signal.
        metrics = METRICS + tuple(f"self_{c}" for c in CRITERIA)
        for row, rec in zip(rows, records):
            for crit in CRITERIA:
                label = rec.self_labels.get(crit)
                row[f"self_{crit}"] = None if label is None else _LEVEL_AS_NUMBER[label]

    report = AnalysisReport(descriptive=descriptive_stats(rows, metrics=metrics))
    report.exclusions = exclusions
    report.counts = {
        "analyzed": len(records),
        "textual": sum(1 for r in records if r.modality == "textual"),
        "pictorial": sum(1 for r in records if r.modality == "pictorial"),
        "distinct_utterances": len({s.text for s in filtered.submissions}),
        "ratings": len(filtered.ratings),
    }

    for metric in ("duration_sec", "char_length", "sentence_count") + CRITERIA:
        obs = [
            (r.modality, r.attr_count, row[metric])
            for r, row in zip(records, rows)
            if row.get(metric) is not None
        ]
        if not obs:
            report.problems[f"anova:{metric}"] = "no observations"
            continue
        try:
            report.anovas[metric] = two_way_anova(ObservationTable.from_rows(obs))
        except DegenerateDesign as exc:
            report.problems[f"anova:{metric}"] = str(exc)

    for crit in CRITERIA:
        paired = [
            (r.self_labels[crit], crowd_bucket(r.crowd_means[crit]).value)
            for r in records
            if crit in r.self_labels and crit in r.crowd_means
        ]
        if not paired:
            report.problems[f"kappa:{crit}"] = "no utterance has both self and crowd ratings"
            continue
        report.kappas[crit] = cohens_kappa([p[0] for p in paired], [p[1] for p in paired])

    for source, label_of in (
        ("crowd", lambda r: crowd_bucket(r.crowd_means["informativeness"]).value
         if "informativeness" in r.crowd_means else None),
        ("self", lambda r: r.self_labels.get("informativeness")),
    ):
        paired = [
            (label_of(r), r.similarity_bucket)
            for r in records
            if label_of(r) is not None and r.similarity_bucket is not None
        ]
        name = f"{source}_informativeness_vs_similarity"
        if not paired:
            report.problems[f"agreement:{name}"] = "no paired labels"
            continue
        report.agreements[name] = percentage_agreement(
            [p[0] for p in paired], [p[1] for p in paired]
        )

    paired = [
        (r.crowd_means["naturalness"], r.crowd_means["phrasing"])
        for r in records
        if "naturalness" in r.crowd_means and "phrasing" in r.crowd_means
    ]
    if len(paired) < 3:
        report.problems["pearson:naturalness~phrasing"] = "fewer than three rated utterances"
    else:
        try:
            report.pearson_naturalness_phrasing = pearson(
                [p[0] for p in paired], [p[1] for p in paired]
            )
        except ConstantInput as exc:
            report.problems["pearson:naturalness~phrasing"] = str(exc)

    return report


_LEVEL_AS_NUMBER = {
    Bucket.LOWER.value: 1.0,
    Bucket.AVERAGE.value: 2.0,
    Bucket.HIGHER.value: 3.0,
}
