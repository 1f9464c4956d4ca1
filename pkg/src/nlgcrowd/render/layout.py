"""Spatial layout of the city-map background.

The map expresses two attributes geometrically: the venue anchor lands inside
the river band for riverside, inside the centre region for city centre, and
outside both when no area is given; a landmark anchor sits within a fixed
radius of the venue whenever the MR names a nearby venue.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import hypot


@dataclass(frozen=True)
class Point:
    x: float
    y: float


@dataclass(frozen=True)
class Rect:
    x: float
    y: float
    width: float
    height: float

    def contains(self, p: Point) -> bool:
        return self.x <= p.x <= self.x + self.width and self.y <= p.y <= self.y + self.height


@dataclass(frozen=True)
class MapLayout:
    canvas_width: float
    canvas_height: float
    river_band: Rect
    centre_region: Rect
    default_slot: Point
    area_slots: dict[str, Point]  # area value -> venue anchor
    landmark_offset: tuple[float, float]
    adjacency_radius: float

    def __post_init__(self) -> None:
        r, c = self.river_band, self.centre_region
        overlap_x = r.x < c.x + c.width and c.x < r.x + r.width
        overlap_y = r.y < c.y + c.height and c.y < r.y + r.height
        if overlap_x and overlap_y:
            raise ValueError("river band and centre region must be disjoint")
        if self.river_band.contains(self.default_slot) or self.centre_region.contains(
            self.default_slot
        ):
            raise ValueError("default venue slot must sit outside both regions")
        if hypot(*self.landmark_offset) > self.adjacency_radius:
            raise ValueError("landmark offset exceeds the adjacency radius")


def default_layout() -> MapLayout:
    return MapLayout(
        canvas_width=800,
        canvas_height=600,
        river_band=Rect(0, 440, 800, 90),
        centre_region=Rect(290, 150, 220, 180),
        default_slot=Point(140, 110),
        area_slots={
            "riverside": Point(400, 487),
            "city centre": Point(400, 242),
        },
        landmark_offset=(78.0, -42.0),
        adjacency_radius=100.0,
    )


def layout_position(area_value: str | None, has_near: bool, layout: MapLayout) -> Point:
    """Venue anchor for the given area value (``None`` = no area attribute).

    ``has_near`` does not move the venue; it only means a landmark anchor
    will be derived from the returned point.
    """
    del has_near  # placement of the venue itself is area-driven only
    if area_value is None:
        return layout.default_slot
    try:
        return layout.area_slots[area_value]
    except KeyError:
        raise ValueError(f"no map slot for area value {area_value!r}") from None


def landmark_position(venue: Point, layout: MapLayout) -> Point:
    dx, dy = layout.landmark_offset
    return Point(venue.x + dx, venue.y + dy)
