import xml.etree.ElementTree as ET
from math import hypot

import pytest

from nlgcrowd.render import (
    IconSpec,
    MissingIcon,
    RenderConfig,
    default_layout,
    landmark_position,
    layout_position,
    load_render_config,
    render_svg,
    value_class,
)
from nlgcrowd.render.icons import GlyphLibrary
from nlgcrowd.schema import parse_textual_mr

from helpers import svg_pair_anchors


class TestLayout:
    def test_riverside_lands_in_band(self):
        layout = default_layout()
        p = layout_position("riverside", False, layout)
        assert layout.river_band.contains(p)
        assert not layout.centre_region.contains(p)

    def test_centre_lands_in_region(self):
        layout = default_layout()
        p = layout_position("city centre", True, layout)
        assert layout.centre_region.contains(p)
        assert not layout.river_band.contains(p)

    def test_absent_area_lands_outside_both(self):
        layout = default_layout()
        p = layout_position(None, False, layout)
        assert not layout.river_band.contains(p)
        assert not layout.centre_region.contains(p)

    def test_landmark_within_adjacency_radius(self):
        layout = default_layout()
        for area in (None, "riverside", "city centre"):
            venue = layout_position(area, True, layout)
            lm = landmark_position(venue, layout)
            assert hypot(lm.x - venue.x, lm.y - venue.y) <= layout.adjacency_radius

    def test_unknown_area_value(self):
        with pytest.raises(ValueError):
            layout_position("moon base", False, default_layout())


FIG_LEFT = (
    "name[Loch Fyne], eatType[restaurant], familyFriendly[Yes], priceRange[cheap], "
    "food[Japanese]"
)


class TestRenderSvg:
    def test_well_formed_and_deterministic(self, schema, render_config):
        mr = parse_textual_mr(FIG_LEFT, schema)
        one = render_svg(mr, render_config, 5, schema)
        two = render_svg(mr, render_config, 5, schema)
        ET.fromstring(one)
        assert one == two

    def test_one_element_per_pair_and_none_extra(self, schema, render_config, mrs75):
        for mr in mrs75:
            svg = render_svg(mr, render_config, 1, schema)
            anchors = svg_pair_anchors(svg)
            assert set(anchors) == {a for a, _ in mr.pairs}

    def test_family_friendly_yes_is_not_crossed_out(self, schema, render_config):
        mr = parse_textual_mr(FIG_LEFT, schema)
        svg = render_svg(mr, render_config, 5, schema)
        ff = svg.split('id="attr:familyFriendly"')[1].split("</g></g>")[0]
        cross = GlyphLibrary().inner_svg("cross")
        assert cross not in ff
        assert "Loch Fyne" in svg  # verbatim name appears as a text label

    def test_family_friendly_no_has_cross_overlay(self, schema, render_config):
        mr = parse_textual_mr("name[Aromi], familyFriendly[No], eatType[pub]", schema)
        svg = render_svg(mr, render_config, 5, schema)
        group = svg.split('id="attr:familyFriendly"')[1]
        cross = GlyphLibrary().inner_svg("cross")
        assert cross in group

    def test_rating_draws_filled_and_outline_stars(self, schema, render_config):
        mr = parse_textual_mr("name[Aromi], customerRating[4 of 5 (high)]", schema)
        svg = render_svg(mr, render_config, 9, schema)
        group = svg.split('id="attr:customerRating"')[1].split('<g id=')[0]
        filled = GlyphLibrary().inner_svg("star-filled")
        outline = GlyphLibrary().inner_svg("star-outline")
        assert group.count(filled) == 4
        assert group.count(outline) == 1
        anchors = svg_pair_anchors(svg)
        assert anchors["customerRating"][0] == "val:4-of-5"

    def test_price_range_coin_counts_follow_value_order(self, schema, render_config):
        coin = GlyphLibrary().inner_svg("coin")
        for value, count in (("cheap", 1), ("moderate", 2), ("expensive", 3)):
            mr = parse_textual_mr(f"name[Aromi], priceRange[{value}]", schema)
            svg = render_svg(mr, render_config, 3, schema)
            group = svg.split('id="attr:priceRange"')[1].split('<g id=')[0]
            assert group.count(coin) == count

    def test_spatial_semantics_in_emitted_coordinates(self, schema, render_config):
        layout = render_config.layout
        mr = parse_textual_mr("name[Aromi], area[riverside], near[Cafe Adriatic]", schema)
        anchors = svg_pair_anchors(render_svg(mr, render_config, 2, schema))
        _, ax, ay = anchors["area"]
        from nlgcrowd.render import Point

        assert layout.river_band.contains(Point(ax, ay))
        _, nx, ny = anchors["near"]
        assert hypot(nx - ax, ny - ay) <= layout.adjacency_radius

    def test_seed_shuffles_badge_order(self, schema, render_config):
        mr = parse_textual_mr(
            "name[Aromi], familyFriendly[Yes], priceRange[cheap], food[Japanese], "
            "customerRating[2 of 5]",
            schema,
        )
        outputs = {render_svg(mr, render_config, seed, schema) for seed in range(8)}
        assert len(outputs) > 1

    def test_missing_icon_raises(self, schema):
        layout = default_layout()
        sparse = RenderConfig(
            layout=layout, icons=(IconSpec("eatType", "pub", "beer-mug"),), glyphs=GlyphLibrary()
        )
        mr = parse_textual_mr("name[Aromi], food[Japanese]", schema)
        with pytest.raises(MissingIcon):
            render_svg(mr, sparse, 1, schema)


class TestLoadRenderConfig:
    def test_default_covers_schema(self, schema):
        config = load_render_config(schema)
        for spec in schema:
            for value in spec.legal_values:
                assert config.icon_for(spec.name, value)

    def test_incomplete_icon_table_fails_at_load(self, schema):
        with pytest.raises(MissingIcon):
            load_render_config(schema, icons=(IconSpec("eatType", "pub", "beer-mug"),))

    def test_boolean_no_must_be_negated(self, schema):
        from nlgcrowd.render.icons import DEFAULT_ICONS

        broken = tuple(
            IconSpec(i.attribute, i.value_match, i.glyph_id, negated=False)
            for i in DEFAULT_ICONS
        )
        with pytest.raises(MissingIcon):
            load_render_config(schema, icons=broken)


def test_value_class_normalization():
    assert value_class("4 of 5 (high)") == "4-of-5"
    assert value_class("city centre") == "city-centre"
    assert value_class("No") == "no"
    assert value_class("Loch Fyne") == "loch-fyne"
