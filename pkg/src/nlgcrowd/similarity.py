"""MR/utterance semantic similarity scoring.

Two scorers share one 0..1 raw scale: a deterministic lexical-coverage
baseline that runs fully offline, and a client for a remote text-similarity
web service whose responses are cached on disk so reruns never depend on the
network.  Raw scores map onto the 1..6 scale used for human ratings and then
into three coarse buckets.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path

import requests

from .schema import AttributeKind, DomainSchema, MeaningRepresentation


class SimilarityError(Exception):
    pass


class OutOfRange(SimilarityError):
    pass


class Unreachable(SimilarityError):
    pass


class MalformedResponse(SimilarityError):
    pass


class Bucket(str, Enum):
    LOWER = "lower_than_average"
    AVERAGE = "average"
    HIGHER = "higher_than_average"


def normalize_score(raw: float) -> float:
    """Affine map of a raw 0..1 score onto the 1..6 rating scale."""
    if not 0.0 <= raw <= 1.0:
        raise OutOfRange(f"raw score {raw} outside [0, 1]")
    return 1.0 + 5.0 * raw


def bucket_score(normalized: float) -> Bucket:
    """Three-way label: above 4 is high, below 3 is low, otherwise average.

    The thresholds are strict, so 3.0 and 4.0 both land on average.  The same
    rule buckets 1..6 human ratings, keeping the two label streams comparable.
    """
    if not 1.0 <= normalized <= 6.0:
        raise OutOfRange(f"normalized score {normalized} outside [1, 6]")
    if normalized > 4.0:
        return Bucket.HIGHER
    if normalized < 3.0:
        return Bucket.LOWER
    return Bucket.AVERAGE


@dataclass(frozen=True)
class SimilarityScore:
    raw: float
    normalized: float
    bucket: Bucket

    @classmethod
    def from_raw(cls, raw: float) -> "SimilarityScore":
        normalized = normalize_score(raw)
        return cls(raw=raw, normalized=normalized, bucket=bucket_score(normalized))


def _squash(text: str) -> str:
    return " ".join(text.split()).casefold()


class SynonymLexicon:
    """Substitutable phrasings for attribute values.

    ``groups`` are symmetric sets of interchangeable terms; ``value_phrases``
    adds per-attribute phrasings (e.g. ways of saying familyFriendly[No]).
    """

    def __init__(
        self,
        groups: list[set[str]] | None = None,
        value_phrases: dict[str, dict[str, list[str]]] | None = None,
    ):
        self.groups = [set(g) for g in (groups or [])]
        if any(not g for g in self.groups):
            raise ValueError("empty synonym group")
        self.value_phrases = value_phrases or {}

    def phrasings(self, attr: str, value: str) -> set[str]:
        """All phrases that count as expressing (attr, value), value included."""
        out = {value}
        out.update(self.value_phrases.get(attr, {}).get(value, ()))
        for group in self.groups:
            if value in group:
                out.update(group)
        return out

    @classmethod
    def load(cls, path: str | Path | None = None) -> "SynonymLexicon":
        if path is None:
            raw = resources.files("nlgcrowd.data").joinpath("lexicon.json").read_text("utf-8")
        else:
            raw = Path(path).read_text("utf-8")
        doc = json.loads(raw)
        return cls(
            groups=[set(g) for g in doc.get("groups", [])],
            value_phrases=doc.get("value_phrases", {}),
        )


def score_baseline(
    mr: MeaningRepresentation,
    utterance: str,
    lexicon: SynonymLexicon,
    schema: DomainSchema,
) -> float:
    """Fraction of MR pairs whose value is expressed in the utterance.

    A pair counts as covered when its value, or any lexicon-equivalent
    phrasing, occurs as a substring of the case-folded utterance.  Verbatim
    attributes (venue and landmark names) must appear as the value itself.
    Purely lexical: no stemming, no word boundaries.
    """
    if not mr.pairs:
        raise ValueError("MR has no pairs")
    hay = _squash(utterance)
    covered = 0
    for attr, value in mr.pairs:
        if schema.get(attr).kind is AttributeKind.VERBATIM:
            candidates = {value}
        else:
            candidates = lexicon.phrasings(attr, value)
        if any(_squash(c) in hay for c in candidates):
            covered += 1
    return covered / len(mr.pairs)


class SimilarityCache:
    """Append-only on-disk map from (mr_text, utterance) to a raw score.

    The first value written for a key is the one served forever after; later
    appends for the same key are ignored on load, which keeps replays stable.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._entries: dict[tuple[str, str], float] = {}
        if self.path.exists():
            with self.path.open("r", encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    rec = json.loads(line)
                    self._entries.setdefault((rec["mr_text"], rec["utterance"]), rec["score"])

    def get(self, mr_text: str, utterance: str) -> float | None:
        return self._entries.get((mr_text, utterance))

    def put(self, mr_text: str, utterance: str, score: float) -> float:
        with self._lock:
            key = (mr_text, utterance)
            if key in self._entries:
                return self._entries[key]
            self._entries[key] = score
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(
                    json.dumps(
                        {"mr_text": mr_text, "utterance": utterance, "score": score},
                        ensure_ascii=False,
                    )
                    + "\n"
                )
                fh.flush()
            return score

    def __len__(self) -> int:
        return len(self._entries)


#: Cache fixture with the remote service's reference behaviour recorded.
def reference_cache_path() -> Path:
    return Path(str(resources.files("nlgcrowd.data").joinpath("similarity_cache.jsonl")))


class RemoteSimilarityClient:
    """Client for a phrase-pair similarity web service.

    Every answered query is appended to the cache, so a corpus scored once
    can be re-scored offline.  With no endpoint configured the client serves
    cache hits only.
    """

    def __init__(self, endpoint: str | None, cache: SimilarityCache, timeout: float = 10.0):
        self.endpoint = endpoint
        self.cache = cache
        self.timeout = timeout

    def score(self, mr_text: str, utterance: str) -> float:
        cached = self.cache.get(mr_text, utterance)
        if cached is not None:
            return cached
        if not self.endpoint:
            raise Unreachable("no similarity endpoint configured and the pair is not cached")
        try:
            resp = requests.get(
                self.endpoint,
                params={"phrase1": mr_text, "phrase2": utterance},
                timeout=self.timeout,
            )
            resp.raise_for_status()
        except requests.RequestException as exc:
            raise Unreachable(f"similarity service request failed: {exc}") from exc
        try:
            score = float(resp.text.strip())
        except ValueError as exc:
            raise MalformedResponse(
                f"similarity service returned non-numeric body {resp.text[:80]!r}"
            ) from exc
        if not 0.0 <= score <= 1.0:
            raise OutOfRange(f"similarity service returned {score}, outside [0, 1]")
        return self.cache.put(mr_text, utterance, score)
