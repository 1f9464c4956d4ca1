"""Automatic pre-validation of submitted utterances.

Six rules gate a submission: legal characters only, a minimum length derived
from the MR, required verbatim elements present, no per-worker duplicates,
a minimum time on page, and an allowed submitter country.  A report always
carries a verdict for every rule; nothing short-circuits.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .schema import AttributeKind, DomainSchema, MeaningRepresentation, mr_char_length

# Officially assigned ISO 3166-1 alpha-2 codes.  User-assigned ranges
# (AA, QM..QZ, XA..XZ, ZZ) are deliberately absent.
ISO_ALPHA2 = frozenset(
    """
    AD AE AF AG AI AL AM AO AQ AR AS AT AU AW AX AZ
    BA BB BD BE BF BG BH BI BJ BL BM BN BO BQ BR BS BT BV BW BY BZ
    CA CC CD CF CG CH CI CK CL CM CN CO CR CU CV CW CX CY CZ
    DE DJ DK DM DO DZ EC EE EG EH ER ES ET FI FJ FK FM FO FR
    GA GB GD GE GF GG GH GI GL GM GN GP GQ GR GS GT GU GW GY
    HK HM HN HR HT HU ID IE IL IM IN IO IQ IR IS IT JE JM JO JP
    KE KG KH KI KM KN KP KR KW KY KZ LA LB LC LI LK LR LS LT LU LV LY
    MA MC MD ME MF MG MH MK ML MM MN MO MP MQ MR MS MT MU MV MW MX MY MZ
    NA NC NE NF NG NI NL NO NP NR NU NZ OM
    PA PE PF PG PH PK PL PM PN PR PS PT PW PY QA RE RO RS RU RW
    SA SB SC SD SE SG SH SI SJ SK SL SM SN SO SR SS ST SV SX SY SZ
    TC TD TF TG TH TJ TK TL TM TN TO TR TT TV TW TZ
    UA UG UM US UY UZ VA VC VE VG VI VN VU WF WS YE YT ZA ZM ZW
    """.split()
)

DEFAULT_LEGAL_SYMBOLS = frozenset(",.:;£'\"")


@dataclass(frozen=True)
class ValidationConfig:
    legal_symbols: frozenset[str] = DEFAULT_LEGAL_SYMBOLS
    attr_name_allowance: int = 10
    min_page_seconds: int = 20
    allowed_countries: frozenset[str] = frozenset({"CA", "GB", "US"})
    min_length_floor: int = 1

    def __post_init__(self) -> None:
        if self.attr_name_allowance <= 0:
            raise ValueError("attr_name_allowance must be positive")
        if self.min_page_seconds < 0:
            raise ValueError("min_page_seconds must be >= 0")

    @classmethod
    def from_file(cls, path: str | Path) -> "ValidationConfig":
        doc = json.loads(Path(path).read_text("utf-8"))
        kwargs = {}
        if "legal_symbols" in doc:
            kwargs["legal_symbols"] = frozenset(_as_char(s) for s in doc["legal_symbols"])
        for key in ("attr_name_allowance", "min_page_seconds", "min_length_floor"):
            if key in doc:
                kwargs[key] = int(doc[key])
        if "allowed_countries" in doc:
            kwargs["allowed_countries"] = frozenset(doc["allowed_countries"])
        return cls(**kwargs)


def _as_char(symbol: int | str) -> str:
    """Accept a symbol as an integer code point or a one-character string."""
    if isinstance(symbol, int):
        return chr(symbol)
    if len(symbol) != 1:
        raise ValueError(f"legal symbol must be one character, got {symbol!r}")
    return symbol


@dataclass(frozen=True)
class Submission:
    worker_id: str
    mr_id: str
    text: str
    issued_at: float
    submitted_at: float
    modality: str
    batch_id: str
    country_code: str

    def __post_init__(self) -> None:
        if self.submitted_at < self.issued_at:
            raise ValueError("submitted_at precedes issued_at")
        if not self.text.strip():
            raise ValueError("empty utterance")
        if self.modality not in ("textual", "pictorial"):
            raise ValueError(f"unknown modality {self.modality!r}")


@dataclass(frozen=True)
class Verdict:
    passed: bool
    detail: str | None = None

    @classmethod
    def ok(cls) -> "Verdict":
        return cls(True)

    @classmethod
    def fail(cls, detail: str) -> "Verdict":
        return cls(False, detail)


VALIDATOR_NAMES = (
    "legal_characters",
    "min_length",
    "required_elements",
    "duplicate",
    "timing",
    "locale",
)


@dataclass(frozen=True)
class ValidationReport:
    verdicts: Mapping[str, Verdict]
    accepted: bool = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "accepted", all(v.passed for v in self.verdicts.values()))

    def failures(self) -> dict[str, str]:
        return {k: v.detail or "" for k, v in self.verdicts.items() if not v.passed}

    def to_dict(self) -> dict:
        return {
            "overall": "accepted" if self.accepted else "rejected",
            "verdicts": {
                k: {"passed": v.passed, "detail": v.detail} for k, v in self.verdicts.items()
            },
        }


# --- the individual rules -------------------------------------------------

def _is_legal_char(ch: str, config: ValidationConfig) -> bool:
    return ch.isalpha() or ch.isdigit() or ch.isspace() or ch in config.legal_symbols


def check_legal_characters(text: str, config: ValidationConfig) -> Verdict:
    offending = [(i, ch) for i, ch in enumerate(text) if not _is_legal_char(ch, config)]
    if not offending:
        return Verdict.ok()
    shown = ", ".join(f"{ch!r}@{i}" for i, ch in offending[:10])
    more = "" if len(offending) <= 10 else f" (+{len(offending) - 10} more)"
    return Verdict.fail(f"illegal characters: {shown}{more}")


def min_required_length(mr: MeaningRepresentation, config: ValidationConfig) -> int:
    """Minimum utterance length for ``mr``: its textual length minus a fixed
    allowance per attribute name, clamped below by the configured floor.

    With the default allowance of 10 the result approximates the number of
    characters the attribute values themselves occupy.
    """
    raw = mr_char_length(mr) - mr.complexity * config.attr_name_allowance
    return max(config.min_length_floor, raw)


def length_ok(text: str, required: int) -> bool:
    return len(text) >= required


def check_min_length(text: str, mr: MeaningRepresentation, config: ValidationConfig) -> Verdict:
    required = min_required_length(mr, config)
    if length_ok(text, required):
        return Verdict.ok()
    return Verdict.fail(f"length {len(text)} below required minimum {required}")


def required_values(mr: MeaningRepresentation, schema: DomainSchema) -> list[str]:
    """Values the utterance must contain verbatim: all verbatim-string pairs."""
    return [
        v for a, v in mr.pairs if schema.get(a).kind is AttributeKind.VERBATIM
    ]


def _squash(text: str) -> str:
    return " ".join(text.split()).casefold()


def missing_required_elements(text: str, values: Iterable[str]) -> list[str]:
    """Return the required values missing from ``text`` (case-insensitive,
    whitespace-normalized substring match)."""
    hay = _squash(text)
    return [v for v in values if _squash(v) not in hay]


def check_required_elements(
    text: str, mr: MeaningRepresentation, schema: DomainSchema
) -> Verdict:
    missing = missing_required_elements(text, required_values(mr, schema))
    if not missing:
        return Verdict.ok()
    return Verdict.fail("missing required elements: " + ", ".join(repr(m) for m in missing))


def check_duplicate(text: str, worker_history: Sequence[str]) -> Verdict:
    mine = _squash(text)
    for prior in worker_history:
        if _squash(prior) == mine:
            return Verdict.fail("utterance repeats an earlier submission by this worker")
    return Verdict.ok()


def timing_ok(elapsed_seconds: float, min_page_seconds: float) -> bool:
    return elapsed_seconds >= min_page_seconds


def check_timing(issued_at: float, submitted_at: float, config: ValidationConfig) -> Verdict:
    elapsed = submitted_at - issued_at
    if timing_ok(elapsed, config.min_page_seconds):
        return Verdict.ok()
    return Verdict.fail(
        f"page completed in {elapsed:.0f}s, minimum is {config.min_page_seconds}s"
    )


def check_locale(country_code: str, config: ValidationConfig) -> Verdict:
    if country_code not in ISO_ALPHA2:
        return Verdict.fail(f"unknown country code {country_code!r}")
    if country_code not in config.allowed_countries:
        return Verdict.fail(f"country {country_code} not in {sorted(config.allowed_countries)}")
    return Verdict.ok()


def validate_submission(
    sub: Submission,
    mr: MeaningRepresentation,
    schema: DomainSchema,
    history: Sequence[str],
    config: ValidationConfig,
) -> ValidationReport:
    """Run every rule and assemble the full report.

    All validators are evaluated even after a failure so the report names
    everything wrong with a submission at once.
    """
    verdicts = {
        "legal_characters": check_legal_characters(sub.text, config),
        "min_length": check_min_length(sub.text, mr, config),
        "required_elements": check_required_elements(sub.text, mr, schema),
        "duplicate": check_duplicate(sub.text, history),
        "timing": check_timing(sub.issued_at, sub.submitted_at, config),
        "locale": check_locale(sub.country_code, config),
    }
    return ValidationReport(verdicts=verdicts)
