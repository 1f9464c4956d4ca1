"""Shared test utilities: a tiny template realizer for authoring valid
utterances, SVG coordinate extraction, and fixture materialization."""

from __future__ import annotations

import json
import re
from pathlib import Path

from nlgcrowd.schema import DomainSchema, MeaningRepresentation

FIXTURES = Path(__file__).parent / "fixtures"
REPO_ROOT = Path(__file__).parent.parent


def load_fixture(name: str):
    return json.loads((FIXTURES / name).read_text("utf-8"))


_RATING = re.compile(r"^\s*(\d+\s+of\s+\d+)")


def verbalize(mr: MeaningRepresentation) -> str:
    """Author a clean utterance for ``mr``.

    Every attribute value is expressed (verbatim ones literally), only legal
    characters are used, and the result is comfortably longer than the
    minimum-length rule requires since every value appears plus connectives.
    """
    v = mr.as_dict()
    subject = v.get("name", "This venue")
    head = [subject, "is"]
    if "priceRange" in v:
        head.append(f"a {v['priceRange']}")
        head.append(v.get("eatType", "venue"))
    elif "eatType" in v:
        head.append(f"a {v['eatType']}")
    else:
        head.append("a venue")
    if "food" in v:
        head.append(f"serving {v['food']} food")
    sentences = [" ".join(head) + "."]
    if "familyFriendly" in v:
        if v["familyFriendly"] == "Yes":
            sentences.append("It welcomes families with children.")
        else:
            sentences.append("It is not a place for children.")
    place = []
    if "area" in v:
        place.append(f"in the {v['area']} area" if v["area"] != "riverside" else "by the riverside")
    if "near" in v:
        place.append(f"close to {v['near']}")
    if place:
        sentences.append("You will find it " + " and ".join(place) + ".")
    if "customerRating" in v:
        rating = _RATING.match(v["customerRating"])
        spoken = rating.group(1) if rating else v["customerRating"]
        sentences.append(f"Customers rate it {spoken}.")
    return " ".join(sentences)


_TRANSLATE = re.compile(
    r'<g id="attr:(?P<attr>[^"]+)" data-val="(?P<val>[^"]+)" '
    r'transform="translate\((?P<x>-?[0-9.]+) (?P<y>-?[0-9.]+)\)"'
)


def svg_pair_anchors(svg: str) -> dict[str, tuple[str, float, float]]:
    """Map attribute -> (value-class, x, y) for every pair group in the SVG."""
    out = {}
    for m in _TRANSLATE.finditer(svg):
        out[m.group("attr")] = (m.group("val"), float(m.group("x")), float(m.group("y")))
    return out


def materialize_cells(fixture: dict) -> list[dict]:
    """Expand the per-cell summary fixture into observation records.

    Each cell becomes n records whose values alternate mean-spread and
    mean+spread (one record pinned at the mean when n is odd), which keeps
    every cell mean exact while giving the cells non-zero variance.
    """
    records = []
    for cell in fixture["cells"]:
        n = cell["n"]
        for i in range(n):
            rec = {"modality": cell["modality"], "attr_count": cell["attr_count"]}
            for metric, mean in cell["means"].items():
                spread = cell["spreads"][metric]
                if n % 2 == 1 and i == n - 1:
                    rec[metric] = mean
                else:
                    rec[metric] = mean - spread if i % 2 == 0 else mean + spread
            records.append(rec)
    return records
