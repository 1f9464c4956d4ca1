"""Domain schema and meaning representations.

A meaning representation (MR) is an unordered set of attribute/value pairs
describing a venue.  The textual surface form is ``attr[value]`` items joined
by ``", "``; the pair order of that form is presentation-only and never part
of the meaning.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator


class MrError(ValueError):
    """Base class for schema and MR violations."""


class MalformedSyntax(MrError):
    pass


class UnknownAttribute(MrError):
    pass


class IllegalValue(MrError):
    pass


class DuplicateAttribute(MrError):
    pass


class AttributeKind(str, Enum):
    VERBATIM = "verbatim"
    CLOSED_SET = "closed"
    BOOLEAN = "boolean"
    ENUMERABLE = "enumerable"


@dataclass(frozen=True)
class AttributeSpec:
    """One attribute of the domain: its kind and, where closed, legal values.

    ``samples`` feeds the MR generator for verbatim attributes (any string is
    legal for those; the generator still needs concrete values to draw from).
    """

    name: str
    kind: AttributeKind
    legal_values: tuple[str, ...] = ()
    samples: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.name:
            raise MrError("attribute name must be non-empty")
        if self.kind in (AttributeKind.CLOSED_SET, AttributeKind.ENUMERABLE):
            if not self.legal_values:
                raise MrError(f"{self.name}: {self.kind.value} attribute needs legal values")
            if len(set(self.legal_values)) != len(self.legal_values):
                raise MrError(f"{self.name}: duplicate legal values")
        elif self.kind is AttributeKind.BOOLEAN:
            if tuple(self.legal_values) != ("Yes", "No"):
                raise MrError(f"{self.name}: boolean legal values must be exactly Yes/No")
        elif self.legal_values:
            raise MrError(f"{self.name}: verbatim attribute must not list legal values")

    def check_value(self, value: str) -> str:
        """Validate ``value`` for this attribute, returning its canonical form."""
        if self.kind is AttributeKind.VERBATIM:
            if not value.strip():
                raise IllegalValue(f"{self.name}: empty value")
            return value
        if self.kind is AttributeKind.BOOLEAN:
            # The Yes/No spelling varies in the wild; accept any casing.
            low = value.strip().lower()
            if low == "yes":
                return "Yes"
            if low == "no":
                return "No"
            raise IllegalValue(f"{self.name}: {value!r} is not a Yes/No value")
        if value not in self.legal_values:
            raise IllegalValue(f"{self.name}: {value!r} not in {list(self.legal_values)}")
        return value


@dataclass(frozen=True)
class DomainSchema:
    """The attribute declarations, in declaration order.

    Declaration order defines the canonical pair order used for exports and
    for the character-length measure.
    """

    attributes: tuple[AttributeSpec, ...]

    def __post_init__(self) -> None:
        names = [a.name for a in self.attributes]
        if len(set(names)) != len(names):
            raise MrError("attribute names must be unique")

    def __iter__(self) -> Iterator[AttributeSpec]:
        return iter(self.attributes)

    def __len__(self) -> int:
        return len(self.attributes)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.attributes)

    def get(self, name: str) -> AttributeSpec:
        for spec in self.attributes:
            if spec.name == name:
                return spec
        raise UnknownAttribute(f"unknown attribute {name!r}")

    def declaration_index(self, name: str) -> int:
        for i, spec in enumerate(self.attributes):
            if spec.name == name:
                return i
        raise UnknownAttribute(f"unknown attribute {name!r}")

    def mr(self, mr_id: str, pairs: Iterable[tuple[str, str]]) -> "MeaningRepresentation":
        """Build a schema-validated MR with canonicalized values."""
        seen: set[str] = set()
        checked: list[tuple[str, str]] = []
        for attr, value in pairs:
            if attr in seen:
                raise DuplicateAttribute(f"attribute {attr!r} appears twice")
            seen.add(attr)
            checked.append((attr, self.get(attr).check_value(value)))
        if not checked:
            raise MrError("an MR needs at least one pair")
        return MeaningRepresentation(id=mr_id, pairs=tuple(checked))


class MeaningRepresentation:
    """An unordered attribute→value set with a presentation order.

    Equality and hashing ignore both the id and the pair order: two MRs are
    the same meaning iff their pair sets are equal.
    """

    __slots__ = ("id", "pairs")

    def __init__(self, id: str, pairs: tuple[tuple[str, str], ...]):
        self.id = id
        self.pairs = pairs

    @property
    def complexity(self) -> int:
        return len(self.pairs)

    def as_dict(self) -> dict[str, str]:
        return dict(self.pairs)

    def value(self, attr: str) -> str | None:
        for a, v in self.pairs:
            if a == attr:
                return v
        return None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MeaningRepresentation):
            return NotImplemented
        return frozenset(self.pairs) == frozenset(other.pairs)

    def __hash__(self) -> int:
        return hash(frozenset(self.pairs))

    def __repr__(self) -> str:
        return f"MeaningRepresentation({self.id!r}, {self.pairs!r})"


def parse_textual_mr(text: str, schema: DomainSchema, mr_id: str = "") -> MeaningRepresentation:
    """Parse the textual MR form ``attr[value], attr[value], ...``.

    Whitespace around attribute names is tolerated (some sources typeset a
    space before the bracket); whitespace inside brackets is kept verbatim.
    """
    if not text:
        raise MalformedSyntax("empty MR text")
    pairs: list[tuple[str, str]] = []
    pos = 0
    n = len(text)
    while pos < n:
        open_at = text.find("[", pos)
        if open_at == -1:
            raise MalformedSyntax(f"expected '[' after position {pos}")
        attr = text[pos:open_at].strip()
        if not attr or any(c in attr for c in "],"):
            raise MalformedSyntax(f"bad attribute name {text[pos:open_at]!r}")
        close_at = text.find("]", open_at)
        if close_at == -1:
            raise MalformedSyntax(f"unbalanced bracket for attribute {attr!r}")
        pairs.append((attr, text[open_at + 1 : close_at]))
        pos = close_at + 1
        if pos == n:
            break
        if text[pos] != ",":
            raise MalformedSyntax(f"expected ',' separator at position {pos}")
        pos += 1
        while pos < n and text[pos] == " ":
            pos += 1
        if pos == n:
            raise MalformedSyntax("trailing separator")
    return schema.mr(mr_id, pairs)


def serialize_textual_mr(mr: MeaningRepresentation, seed: int) -> str:
    """Emit the textual form with a seeded uniform shuffle of the pair order.

    Pair order is randomised so readers are not primed by a fixed attribute
    sequence; the result is deterministic for a fixed (mr, seed).
    """
    order = list(mr.pairs)
    random.Random(seed).shuffle(order)
    return ", ".join(f"{a}[{v}]" for a, v in order)


def canonical_textual_mr(mr: MeaningRepresentation, schema: DomainSchema) -> str:
    """Textual form with pairs in schema declaration order."""
    ordered = sorted(mr.pairs, key=lambda p: schema.declaration_index(p[0]))
    return ", ".join(f"{a}[{v}]" for a, v in ordered)


def mr_char_length(mr: MeaningRepresentation) -> int:
    """Character count of the textual MR form.

    The separators are fixed, so the count is the same for every pair order:
    each pair costs len(attr) + len(value) + 2 brackets, plus ", " between
    pairs.  Counts Unicode code points, not bytes.
    """
    per_pair = sum(len(a) + len(v) + 2 for a, v in mr.pairs)
    return per_pair + 2 * (len(mr.pairs) - 1)


#: Complexities an elicitation set may request.
ELICITATION_COMPLEXITIES = (3, 5, 8)

#: Attribute that small MRs must keep so workers can produce a natural opening.
ANCHOR_ATTRIBUTE = "name"


def elicitation_violations(mr: MeaningRepresentation, schema: DomainSchema) -> list[str]:
    """Why ``mr`` is unfit as an elicitation stimulus (empty list = fit).

    Parsing accepts any schema-legal MR (single-pair MRs are useful for
    length arithmetic and tests); stimuli shown to workers must additionally
    have 3, 5 or 8 attributes and keep ``name`` in the 3- and 5-attribute
    cases.
    """
    problems = []
    if mr.complexity not in ELICITATION_COMPLEXITIES:
        problems.append(f"complexity {mr.complexity} not in {ELICITATION_COMPLEXITIES}")
    if (
        mr.complexity in (3, 5)
        and ANCHOR_ATTRIBUTE in schema.names
        and mr.value(ANCHOR_ATTRIBUTE) is None
    ):
        problems.append(f"{mr.complexity}-attribute MR lacks {ANCHOR_ATTRIBUTE!r}")
    return problems


def load_schema(path: str | Path | None = None) -> DomainSchema:
    """Load a schema file (JSON); ``None`` loads the bundled default."""
    if path is None:
        raw = resources.files("nlgcrowd.data").joinpath("schema.json").read_text("utf-8")
    else:
        raw = Path(path).read_text("utf-8")
    doc = json.loads(raw)
    attrs = []
    for entry in doc["attributes"]:
        attrs.append(
            AttributeSpec(
                name=entry["name"],
                kind=AttributeKind(entry["kind"]),
                legal_values=tuple(entry.get("values", ())),
                samples=tuple(entry.get("samples", ())),
            )
        )
    return DomainSchema(attributes=tuple(attrs))


def dump_schema(schema: DomainSchema, path: str | Path) -> None:
    doc = {
        "attributes": [
            {
                "name": a.name,
                "kind": a.kind.value,
                "values": list(a.legal_values),
                "samples": list(a.samples),
            }
            for a in schema.attributes
        ]
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", "utf-8")
