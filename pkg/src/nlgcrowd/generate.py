"""Balanced generation of elicitation MR sets.

A set request asks for a number of MRs per complexity (3, 5 or 8 attributes).
Every generated 3- and 5-attribute MR keeps the ``name`` attribute, and the
remaining attribute slots are spread so that no attribute is over- or
under-used by more than one relative to the others.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping

from .schema import (
    ANCHOR_ATTRIBUTE,
    ELICITATION_COMPLEXITIES,
    AttributeKind,
    AttributeSpec,
    DomainSchema,
    MeaningRepresentation,
)


class InfeasibleRequest(ValueError):
    """The requested set cannot be produced (distinctness or balance)."""


@dataclass(frozen=True)
class MrSetRequest:
    counts: Mapping[int, int]
    seed: int
    schema: DomainSchema

    def __post_init__(self) -> None:
        bad = set(self.counts) - set(ELICITATION_COMPLEXITIES)
        if bad:
            raise InfeasibleRequest(f"unsupported complexities {sorted(bad)}")
        if any(c < 0 for c in self.counts.values()):
            raise InfeasibleRequest("counts must be non-negative")


def _value_pool(spec: AttributeSpec) -> tuple[str, ...]:
    if spec.kind is AttributeKind.VERBATIM:
        return spec.samples
    return spec.legal_values


# Retries per MR before giving up on drawing a fresh value combination.
_MAX_DRAWS = 200


def generate_balanced_set(request: MrSetRequest) -> list[MeaningRepresentation]:
    """Generate the requested MRs, pairwise distinct as attribute→value maps.

    Deterministic for a fixed request: same counts, seed and schema always
    produce the same list in the same order.
    """
    schema = request.schema
    rng = random.Random(request.seed)

    pools = {spec.name: _value_pool(spec) for spec in schema}
    for name, pool in pools.items():
        if not pool:
            raise InfeasibleRequest(f"attribute {name!r} has no values to draw from")

    anchor = ANCHOR_ATTRIBUTE if ANCHOR_ATTRIBUTE in schema.names else None
    others = [n for n in schema.names if n != anchor]
    usage = {n: 0 for n in others}

    seen: set[frozenset[tuple[str, str]]] = set()
    out: list[MeaningRepresentation] = []
    serial = 0

    def draw_values(subset: list[str]) -> tuple[tuple[str, str], ...] | None:
        for _ in range(_MAX_DRAWS):
            pairs = tuple((a, rng.choice(pools[a])) for a in subset)
            key = frozenset(pairs)
            if key not in seen:
                seen.add(key)
                return pairs
        return None

    for complexity in sorted(request.counts):
        wanted = request.counts[complexity]
        if wanted and complexity > len(schema):
            raise InfeasibleRequest(
                f"complexity {complexity} exceeds the {len(schema)}-attribute schema"
            )
        for _ in range(wanted):
            if complexity == len(schema):
                subset = list(schema.names)
            else:
                picks = complexity - (1 if anchor else 0)
                if picks > len(others):
                    raise InfeasibleRequest(f"cannot pick {picks} of {len(others)} attributes")
                # Least-used first keeps every usage count within one of the
                # mean; ties are broken by a seeded shuffle for variety.
                candidates = list(others)
                rng.shuffle(candidates)
                candidates.sort(key=lambda n: usage[n])
                chosen = candidates[:picks]
                for n in chosen:
                    usage[n] += 1
                subset = ([anchor] if anchor else []) + chosen
                subset.sort(key=schema.declaration_index)
            pairs = draw_values(subset)
            if pairs is None:
                raise InfeasibleRequest(
                    f"could not draw a fresh {complexity}-attribute MR after {_MAX_DRAWS} tries"
                )
            out.append(schema.mr(f"mr{serial:03d}", pairs))
            serial += 1
    return out


def attribute_usage(mrs: list[MeaningRepresentation], schema: DomainSchema) -> dict[str, int]:
    """Usage counts of non-anchor attributes over the 3/5-attribute MRs."""
    counts = {n: 0 for n in schema.names if n != ANCHOR_ATTRIBUTE}
    for mr in mrs:
        if mr.complexity in (3, 5):
            for attr, _ in mr.pairs:
                if attr in counts:
                    counts[attr] += 1
    return counts
