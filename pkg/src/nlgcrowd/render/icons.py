"""Icon table and glyph library for the pictorial stimuli."""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..schema import AttributeKind, DomainSchema
from .layout import MapLayout, default_layout


class MissingIcon(LookupError):
    """A schema value has no icon mapping or glyph file."""


#: value_match wildcard for verbatim attributes (any value, one icon style).
ANY_VALUE = "*"


@dataclass(frozen=True)
class IconSpec:
    attribute: str
    value_match: str
    glyph_id: str
    negated: bool = False


# Default icon table for the bundled schema.  Attribute values without an
# entry here fail the coverage check at load time.
DEFAULT_ICONS = (
    IconSpec("eatType", "restaurant", "cutlery"),
    IconSpec("eatType", "pub", "beer-mug"),
    IconSpec("eatType", "coffee shop", "coffee-cup"),
    IconSpec("familyFriendly", "Yes", "child"),
    IconSpec("familyFriendly", "No", "child", negated=True),
    IconSpec("priceRange", "cheap", "coin"),
    IconSpec("priceRange", "moderate", "coin"),
    IconSpec("priceRange", "expensive", "coin"),
    IconSpec("food", "Japanese", "sushi"),
    IconSpec("food", "Italian", "pasta"),
    IconSpec("food", "Chinese", "noodles"),
    IconSpec("food", "Indian", "curry"),
    IconSpec("food", "French", "baguette"),
    IconSpec("food", "English", "fish-and-chips"),
    IconSpec("near", ANY_VALUE, "landmark"),
    IconSpec("area", "riverside", "pin"),
    IconSpec("area", "city centre", "pin"),
    IconSpec("customerRating", "1 of 5 (low)", "star-filled"),
    IconSpec("customerRating", "2 of 5", "star-filled"),
    IconSpec("customerRating", "3 of 5 (average)", "star-filled"),
    IconSpec("customerRating", "4 of 5 (high)", "star-filled"),
    IconSpec("customerRating", "5 of 5 (excellent)", "star-filled"),
)


class GlyphLibrary:
    """Named vector glyphs loaded from a directory of small SVG files.

    Each file is a standalone SVG document; its inner markup is inlined into
    rendered scenes byte-for-byte, so loading is where well-formedness is
    checked.
    """

    def __init__(self, directory: str | Path | None = None):
        if directory is None:
            directory = Path(str(resources.files("nlgcrowd.data").joinpath("glyphs")))
        self.directory = Path(directory)
        self._inner: dict[str, str] = {}

    def inner_svg(self, glyph_id: str) -> str:
        if glyph_id in self._inner:
            return self._inner[glyph_id]
        path = self.directory / f"{glyph_id}.svg"
        if not path.exists():
            raise MissingIcon(f"glyph file {path} not found")
        raw = path.read_text("utf-8")
        ET.fromstring(raw)  # reject malformed glyph files early
        match = re.search(r"<svg\b[^>]*>(.*)</svg>\s*$", raw, re.DOTALL)
        if match is None:
            raise MissingIcon(f"glyph file {path} has no <svg> root")
        inner = match.group(1).strip()
        self._inner[glyph_id] = inner
        return inner


@dataclass(frozen=True)
class RenderConfig:
    layout: MapLayout
    icons: tuple[IconSpec, ...]
    glyphs: GlyphLibrary
    label_font_size: float = 16.0

    def icon_for(self, attribute: str, value: str) -> IconSpec:
        fallback = None
        for spec in self.icons:
            if spec.attribute != attribute:
                continue
            if spec.value_match == value:
                return spec
            if spec.value_match == ANY_VALUE:
                fallback = spec
        if fallback is not None:
            return fallback
        raise MissingIcon(f"no icon for {attribute}[{value}]")


def load_render_config(
    schema: DomainSchema,
    icons: tuple[IconSpec, ...] = DEFAULT_ICONS,
    glyph_dir: str | Path | None = None,
    layout: MapLayout | None = None,
) -> RenderConfig:
    """Build a config and verify it covers every value of the schema.

    Closed-set, boolean and enumerable values each need exactly one icon;
    verbatim attributes render as text labels (plus the wildcard landmark
    glyph for ``near``-style placements).  Boolean "No" must use a negated
    icon.  Referenced glyph files must load.
    """
    config = RenderConfig(
        layout=layout or default_layout(),
        icons=icons,
        glyphs=GlyphLibrary(glyph_dir),
    )
    for spec in schema:
        if spec.kind is AttributeKind.VERBATIM:
            continue
        for value in spec.legal_values:
            matches = [
                i for i in icons if i.attribute == spec.name and i.value_match == value
            ]
            if len(matches) != 1:
                raise MissingIcon(
                    f"{spec.name}[{value}] needs exactly one icon, found {len(matches)}"
                )
            if spec.kind is AttributeKind.BOOLEAN:
                if matches[0].negated != (value == "No"):
                    raise MissingIcon(f"{spec.name}[{value}] negation style is wrong")
            config.glyphs.inner_svg(matches[0].glyph_id)
    return config
