from .icons import (  # noqa: F401
    DEFAULT_ICONS,
    GlyphLibrary,
    IconSpec,
    MissingIcon,
    RenderConfig,
    load_render_config,
)
from .layout import (  # noqa: F401
    MapLayout,
    Point,
    Rect,
    default_layout,
    landmark_position,
    layout_position,
)
from .svg import render_svg, value_class  # noqa: F401
