"""Append-only corpus storage.

One JSON record per line, one file per deployment.  Appends are flushed and
fsynced so a crash can at worst truncate the final line, which the loader
detects and reports with its line number.  All indexing is rebuilt on load.
"""

from __future__ import annotations

import csv
import json
import os
import threading
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterator

from .schema import DomainSchema, MeaningRepresentation, canonical_textual_mr
from .similarity import Bucket

RATER_KINDS = ("self", "crowd")
SELF_LEVELS = tuple(b.value for b in Bucket)


class StoreError(Exception):
    pass


class CorruptRecord(StoreError):
    def __init__(self, path: str | Path, line_no: int, reason: str):
        super().__init__(f"{path}:{line_no}: {reason}")
        self.line_no = line_no


@dataclass(frozen=True)
class TaskRecord:
    task_id: str
    mr_id: str
    batch_id: str
    modality: str
    worker: str
    issued_at: float
    status: str = "open"


@dataclass(frozen=True)
class SubmissionRecord:
    utterance_id: str
    task_id: str
    worker: str
    mr_id: str
    batch_id: str
    modality: str
    text: str
    issued_at: float
    submitted_at: float
    country: str


@dataclass(frozen=True)
class RatingRecord:
    rating_id: str
    utterance_id: str
    rater_id: str
    rater_kind: str
    informativeness: int | str
    naturalness: int | str
    phrasing: int | str
    grammatical: bool

    def __post_init__(self) -> None:
        if self.rater_kind not in RATER_KINDS:
            raise ValueError(f"unknown rater kind {self.rater_kind!r}")
        for crit in (self.informativeness, self.naturalness, self.phrasing):
            if self.rater_kind == "crowd":
                if not (isinstance(crit, int) and 1 <= crit <= 6):
                    raise ValueError(f"crowd ratings are integers 1..6, got {crit!r}")
            else:
                if crit not in SELF_LEVELS:
                    raise ValueError(f"self ratings use {SELF_LEVELS}, got {crit!r}")


@dataclass(frozen=True)
class SimilarityRecord:
    utterance_id: str
    scorer: str
    raw: float
    normalized: float
    bucket: str


_KINDS = {
    "task": TaskRecord,
    "submission": SubmissionRecord,
    "rating": RatingRecord,
    "similarity": SimilarityRecord,
}


@dataclass
class Corpus:
    """In-memory view of a store file."""

    tasks: list[TaskRecord] = field(default_factory=list)
    submissions: list[SubmissionRecord] = field(default_factory=list)
    ratings: list[RatingRecord] = field(default_factory=list)
    similarities: list[SimilarityRecord] = field(default_factory=list)

    def submission_by_utterance(self) -> dict[str, SubmissionRecord]:
        return {s.utterance_id: s for s in self.submissions}

    def ratings_for(self, utterance_id: str, rater_kind: str | None = None) -> list[RatingRecord]:
        return [
            r
            for r in self.ratings
            if r.utterance_id == utterance_id and (rater_kind is None or r.rater_kind == rater_kind)
        ]

    def similarity_for(self, utterance_id: str) -> SimilarityRecord | None:
        # Last write wins so re-scoring with a better scorer takes effect.
        found = None
        for s in self.similarities:
            if s.utterance_id == utterance_id:
                found = s
        return found

    def distinct_utterance_count(self) -> int:
        return len({s.text for s in self.submissions})


def apply_between_subject_filter(corpus: Corpus) -> tuple[Corpus, list[tuple[str, int]]]:
    """Drop pictorial submissions from workers who contributed in both
    modalities, keeping the design between-subject.

    Textual submissions are never removed.  Returns the filtered corpus and
    an exclusion log of (worker, dropped-count) pairs.  Idempotent.
    """
    by_worker: dict[str, set[str]] = {}
    for sub in corpus.submissions:
        by_worker.setdefault(sub.worker, set()).add(sub.modality)
    cross = {w for w, mods in by_worker.items() if {"textual", "pictorial"} <= mods}

    kept: list[SubmissionRecord] = []
    dropped: dict[str, int] = {}
    for sub in corpus.submissions:
        if sub.worker in cross and sub.modality == "pictorial":
            dropped[sub.worker] = dropped.get(sub.worker, 0) + 1
        else:
            kept.append(sub)
    filtered = Corpus(
        tasks=list(corpus.tasks),
        submissions=kept,
        ratings=list(corpus.ratings),
        similarities=list(corpus.similarities),
    )
    return filtered, sorted(dropped.items())


class CorpusStore:
    """Single-writer store over one line-delimited file."""

    def __init__(self, path: str | Path, skip_corrupt: bool = False):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._counters = {"task": 0, "submission": 0, "rating": 0}
        self.corpus = Corpus()
        if self.path.exists():
            for record in _read_records(self.path, skip_corrupt=skip_corrupt):
                self._index(record)

    def _index(self, record) -> None:
        if isinstance(record, TaskRecord):
            self.corpus.tasks.append(record)
            self._counters["task"] += 1
        elif isinstance(record, SubmissionRecord):
            self.corpus.submissions.append(record)
            self._counters["submission"] += 1
        elif isinstance(record, RatingRecord):
            self.corpus.ratings.append(record)
            self._counters["rating"] += 1
        else:
            self.corpus.similarities.append(record)

    def next_id(self, kind: str) -> str:
        prefix = {"task": "t", "submission": "u", "rating": "r"}[kind]
        return f"{prefix}{self._counters[kind]:06d}"

    def append(self, record) -> None:
        """Persist one record; flushed and fsynced before indexing."""
        kind = {v: k for k, v in _KINDS.items()}[type(record)]
        line = json.dumps({"kind": kind, **asdict(record)}, ensure_ascii=False)
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(line + "\n")
                fh.flush()
                os.fsync(fh.fileno())
            self._index(record)


def _read_records(path: Path, skip_corrupt: bool = False) -> Iterator:
    with path.open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped:
                continue
            try:
                doc = json.loads(stripped)
                kind = doc.pop("kind")
                record = _KINDS[kind](**doc)
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                if skip_corrupt:
                    continue
                raise CorruptRecord(path, line_no, str(exc)) from exc
            yield record


def load_corpus(path: str | Path, skip_corrupt: bool = False) -> Corpus:
    corpus = Corpus()
    for record in _read_records(Path(path), skip_corrupt=skip_corrupt):
        if isinstance(record, TaskRecord):
            corpus.tasks.append(record)
        elif isinstance(record, SubmissionRecord):
            corpus.submissions.append(record)
        elif isinstance(record, RatingRecord):
            corpus.ratings.append(record)
        else:
            corpus.similarities.append(record)
    return corpus


# --- export bundle ---------------------------------------------------------

# Field order of export records; fixed so downstream parsers can rely on it.
EXPORT_FIELDS = ("mr", "ref", "modality", "attr_count", "worker", "scores", "ratings")


def export_records(
    corpus: Corpus,
    mrs: dict[str, MeaningRepresentation],
    schema: DomainSchema,
    include_ids: bool = False,
) -> Iterator[dict]:
    """Export pairs for every submission that survived the filter.

    The documented record has exactly EXPORT_FIELDS in order; ``include_ids``
    appends a trailing ``utterance_id`` for consumers (the rating UI) that
    need to reference records, leaving the documented prefix untouched.
    """
    filtered, _ = apply_between_subject_filter(corpus)
    for sub in filtered.submissions:
        mr = mrs[sub.mr_id]
        scores = {}
        sim = filtered.similarity_for(sub.utterance_id)
        if sim is not None:
            scores["similarity"] = {
                "scorer": sim.scorer,
                "raw": sim.raw,
                "normalized": sim.normalized,
                "bucket": sim.bucket,
            }
        ratings = [
            {
                "rater": r.rater_id,
                "kind": r.rater_kind,
                "informativeness": r.informativeness,
                "naturalness": r.naturalness,
                "phrasing": r.phrasing,
                "grammatical": r.grammatical,
            }
            for r in filtered.ratings_for(sub.utterance_id)
        ]
        record = {
            "mr": canonical_textual_mr(mr, schema),
            "ref": sub.text,
            "modality": sub.modality,
            "attr_count": mr.complexity,
            "worker": sub.worker,
            "scores": scores,
            "ratings": ratings,
        }
        if include_ids:
            record["utterance_id"] = sub.utterance_id
        yield record


def export_corpus(
    corpus: Corpus,
    mrs: dict[str, MeaningRepresentation],
    schema: DomainSchema,
    path: str | Path,
) -> int:
    """Write the export bundle; returns the number of records written."""
    count = 0
    with Path(path).open("w", encoding="utf-8") as fh:
        for rec in export_records(corpus, mrs, schema):
            ordered = {k: rec[k] for k in EXPORT_FIELDS}
            fh.write(json.dumps(ordered, ensure_ascii=False) + "\n")
            count += 1
    return count


def load_export(path: str | Path) -> list[dict]:
    out = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                out.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise CorruptRecord(path, line_no, str(exc)) from exc
    return out


RATINGS_CSV_HEADER = (
    "utterance_id",
    "rater_id",
    "rater_kind",
    "informativeness",
    "naturalness",
    "phrasing",
    "grammatical",
)


def import_ratings_csv(store: CorpusStore, path: str | Path) -> int:
    """Append rating records from a CSV table with the declared header row."""
    added = 0
    with Path(path).open("r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != RATINGS_CSV_HEADER:
            raise StoreError(
                f"ratings CSV must declare the header {','.join(RATINGS_CSV_HEADER)}"
            )
        for row in reader:
            kind = row["rater_kind"]
            def coerce(v: str):
                return int(v) if kind == "crowd" else v
            record = RatingRecord(
                rating_id=store.next_id("rating"),
                utterance_id=row["utterance_id"],
                rater_id=row["rater_id"],
                rater_kind=kind,
                informativeness=coerce(row["informativeness"]),
                naturalness=coerce(row["naturalness"]),
                phrasing=coerce(row["phrasing"]),
                grammatical=row["grammatical"].strip().lower() in ("true", "yes", "1"),
            )
            store.append(record)
            added += 1
    return added
