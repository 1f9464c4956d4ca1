"""Deterministic SVG composition of a pictorial MR stimulus.

Every MR pair becomes exactly one ``<g id="attr:<attribute>">`` group carrying
a ``data-val="val:<value-class>"`` marker, so tests (and any downstream
tooling) can verify semantic completeness without looking at pixels.  Byte
output is a pure function of (mr, config, seed).
"""

from __future__ import annotations

import random
import re
from xml.sax.saxutils import escape, quoteattr

from ..schema import AttributeKind, DomainSchema, MeaningRepresentation
from .icons import MissingIcon, RenderConfig
from .layout import Point, landmark_position, layout_position

# Attributes drawn at map positions; everything else goes on the badge strip.
_SPATIAL = ("name", "eatType", "area", "near")

_NEGATION_GLYPH = "cross"
_RATING_OUTLINE_GLYPH = "star-outline"
_RATING_PATTERN = re.compile(r"^\s*(\d+)\s+of\s+(\d+)")

_BADGE_SCALE = 2.2
_BADGE_STEP = 78.0
_BADGE_X0 = 46.0
_BADGE_Y = 36.0


def value_class(value: str) -> str:
    """Machine-readable value identifier: lower case, gloss dropped, hyphens."""
    stripped = re.sub(r"\s*\([^)]*\)\s*$", "", value.strip())
    return re.sub(r"\s+", "-", stripped.lower())


def _fmt(value: float) -> str:
    return f"{value:g}"


def _glyph(config: RenderConfig, glyph_id: str, x: float, y: float, scale: float) -> str:
    inner = config.glyphs.inner_svg(glyph_id)
    return (
        f'<g transform="translate({_fmt(x)} {_fmt(y)}) scale({_fmt(scale)})">{inner}</g>'
    )


def _pair_group(attr: str, value: str, x: float, y: float, body: str) -> str:
    return (
        f'<g id="attr:{attr}" data-val={quoteattr("val:" + value_class(value))} '
        f'transform="translate({_fmt(x)} {_fmt(y)})">{body}</g>'
    )


def _badge_body(config: RenderConfig, attr: str, value: str, kind: AttributeKind) -> str:
    icon = config.icon_for(attr, value)
    if attr == "priceRange":
        # Coin count follows the legal-value order: first value is one coin.
        count = 0
        for spec in config.icons:
            if spec.attribute == "priceRange":
                count += 1
                if spec.value_match == value:
                    break
        count = min(count, 3)
        parts = [
            _glyph(config, icon.glyph_id, i * 20.0, 0.0, 1.4) for i in range(count)
        ]
        return "".join(parts)
    if kind is AttributeKind.ENUMERABLE:
        m = _RATING_PATTERN.match(value)
        if m:
            filled, total = int(m.group(1)), int(m.group(2))
            parts = []
            for i in range(total):
                glyph_id = icon.glyph_id if i < filled else _RATING_OUTLINE_GLYPH
                parts.append(_glyph(config, glyph_id, i * 18.0, 0.0, 1.1))
            return "".join(parts)
    body = _glyph(config, icon.glyph_id, 0.0, 0.0, _BADGE_SCALE)
    if icon.negated:
        body += _glyph(config, _NEGATION_GLYPH, 0.0, 0.0, _BADGE_SCALE)
    return body


def render_svg(mr: MeaningRepresentation, config: RenderConfig, seed: int, schema: DomainSchema) -> str:
    """Render ``mr`` as a standalone SVG 1.1 document string."""
    values = mr.as_dict()
    layout = config.layout

    # Fail fast on anything the icon table cannot draw.
    for attr, value in mr.pairs:
        if schema.get(attr).kind is not AttributeKind.VERBATIM or attr == "near":
            config.icon_for(attr, value)

    venue = layout_position(values.get("area"), "near" in values, layout)
    font = config.label_font_size

    parts: list[str] = []
    parts.append('<?xml version="1.0" encoding="UTF-8"?>')
    parts.append(
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_fmt(layout.canvas_width)}" height="{_fmt(layout.canvas_height)}" '
        f'viewBox="0 0 {_fmt(layout.canvas_width)} {_fmt(layout.canvas_height)}">'
    )
    # City-map background: streets, the river band, the centre region.
    parts.append(
        f'<rect width="{_fmt(layout.canvas_width)}" height="{_fmt(layout.canvas_height)}" fill="#eef3e2"/>'
    )
    rb = layout.river_band
    cr = layout.centre_region
    for x in (100, 250, 620, 720):
        parts.append(
            f'<line x1="{x}" y1="0" x2="{x}" y2="{_fmt(layout.canvas_height)}" stroke="#d8d2c0" stroke-width="8"/>'
        )
    for y in (120, 360, 570):
        parts.append(
            f'<line x1="0" y1="{y}" x2="{_fmt(layout.canvas_width)}" y2="{y}" stroke="#d8d2c0" stroke-width="8"/>'
        )
    parts.append(
        f'<rect id="river-band" x="{_fmt(rb.x)}" y="{_fmt(rb.y)}" width="{_fmt(rb.width)}" '
        f'height="{_fmt(rb.height)}" fill="#9ec9e8"/>'
    )
    parts.append(
        f'<rect id="centre-region" x="{_fmt(cr.x)}" y="{_fmt(cr.y)}" width="{_fmt(cr.width)}" '
        f'height="{_fmt(cr.height)}" fill="#e3d9c2" stroke="#b8a888" stroke-dasharray="6 4"/>'
    )

    # Spatially meaningful pairs.
    if "area" in values:
        pin = config.icon_for("area", values["area"]).glyph_id
        parts.append(
            _pair_group("area", values["area"], venue.x, venue.y, _glyph(config, pin, -12, -44, 1.0))
        )
    if "eatType" in values:
        parts.append(
            _pair_group(
                "eatType",
                values["eatType"],
                venue.x - 24,
                venue.y - 24,
                _badge_body(config, "eatType", values["eatType"], AttributeKind.CLOSED_SET),
            )
        )
    if "name" in values:
        label = (
            f'<text x="0" y="0" font-family="sans-serif" font-size="{_fmt(font)}" '
            f'text-anchor="middle" fill="#222222">{escape(values["name"])}</text>'
        )
        parts.append(_pair_group("name", values["name"], venue.x, venue.y + 38, label))
    if "near" in values:
        lm: Point = landmark_position(venue, layout)
        body = _glyph(config, config.icon_for("near", values["near"]).glyph_id, -18, -36, 1.5)
        body += (
            f'<text x="0" y="18" font-family="sans-serif" font-size="{_fmt(font * 0.85)}" '
            f'text-anchor="middle" fill="#444444">{escape(values["near"])}</text>'
        )
        parts.append(_pair_group("near", values["near"], lm.x, lm.y, body))

    # Badge strip for the remaining pairs, in seeded-shuffled order so the
    # picture does not prime a fixed attribute sequence either.
    badge_pairs = [(a, v) for a, v in mr.pairs if a not in _SPATIAL]
    random.Random(seed).shuffle(badge_pairs)
    for i, (attr, value) in enumerate(badge_pairs):
        kind = schema.get(attr).kind
        x = _BADGE_X0 + i * _BADGE_STEP
        parts.append(_pair_group(attr, value, x, _BADGE_Y, _badge_body(config, attr, value, kind)))

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
