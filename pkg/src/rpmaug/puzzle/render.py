"""Hard-edged rasterization of symbolic panels.

Shapes are regular polygons (or circles) drawn with a black outline and a
flat fill from the finite palette onto a white background. There is no
anti-aliasing: a pixel is classified by its center, so every produced
intensity is 0, 255 or a palette value. Identical inputs yield
byte-identical panels.
"""

from __future__ import annotations

import math

import numpy as np

from ..domain import Panel, PuzzleConfiguration
from .attributes import (
    FILL_PALETTE,
    SIZE_SCALES,
    ComponentSpec,
    PanelSymbol,
    config_layout,
    mask_cells,
)

# Sides per shape index; 0 encodes a circle.
_TYPE_SIDES = (3, 4, 5, 6, 0)
# Angle of the first vertex, chosen so triangles/pentagons point up and
# squares sit axis-aligned (image y grows downward).
_TYPE_PHASE = {3: -math.pi / 2, 4: math.pi / 4, 5: -math.pi / 2, 6: 0.0}

_SHAPE_MARGIN = 0.92  # fraction of the half-extent a full-size shape uses


def _outline_thickness(radius: float) -> float:
    return max(1.0, min(2.4, 0.18 * radius))


def _draw_shape(
    canvas: np.ndarray,
    box: tuple[int, int, int, int],
    type_idx: int,
    size_idx: int,
    fill: int | None,
) -> None:
    x0, y0, x1, y1 = box
    w, h = x1 - x0, y1 - y0
    if w <= 0 or h <= 0:
        return
    radius = SIZE_SCALES[size_idx] * _SHAPE_MARGIN * min(w, h) / 2.0
    xs = np.arange(w, dtype=np.float64) + 0.5 - w / 2.0
    ys = np.arange(h, dtype=np.float64) + 0.5 - h / 2.0
    px = xs[None, :]
    py = ys[:, None]
    rho = np.hypot(px, py)

    sides = _TYPE_SIDES[type_idx]
    if sides == 0:
        boundary = np.full_like(rho, radius)
    else:
        wedge = 2.0 * math.pi / sides
        apothem = radius * math.cos(math.pi / sides)
        theta = np.arctan2(py, px)
        delta = np.mod(theta - _TYPE_PHASE[sides], wedge) - wedge / 2.0
        boundary = apothem / np.cos(delta)

    t = _outline_thickness(radius)
    outer = rho <= boundary
    inner = rho <= boundary - t
    region = canvas[y0:y1, x0:x1]
    if fill is not None:
        region[inner] = fill
    region[outer & ~inner] = 0


def _pixel_box(
    region: tuple[float, float, float, float], width: int, height: int
) -> tuple[int, int, int, int]:
    fx0, fy0, fx1, fy1 = region
    return (
        int(fx0 * width + 0.5),
        int(fy0 * height + 0.5),
        int(fx1 * width + 0.5),
        int(fy1 * height + 0.5),
    )


def _cell_box(
    box: tuple[int, int, int, int], comp: ComponentSpec, cell: int
) -> tuple[int, int, int, int]:
    x0, y0, x1, y1 = box
    w, h = x1 - x0, y1 - y0
    r, c = divmod(cell, comp.grid_cols)
    cx0 = x0 + int(c * w / comp.grid_cols + 0.5)
    cx1 = x0 + int((c + 1) * w / comp.grid_cols + 0.5)
    cy0 = y0 + int(r * h / comp.grid_rows + 0.5)
    cy1 = y0 + int((r + 1) * h / comp.grid_rows + 0.5)
    return (cx0, cy0, cx1, cy1)


def render_panel(
    config: PuzzleConfiguration, symbol: PanelSymbol, width: int, height: int
) -> Panel:
    """Rasterize one panel symbol at the requested resolution.

    Components draw in layout order (outer rings first), so inner
    components overdraw where they overlap.
    """
    layout = config_layout(config)
    if len(symbol) != len(layout):
        raise ValueError(
            f"symbol has {len(symbol)} components, layout needs {len(layout)}"
        )
    if width <= 0 or height <= 0:
        raise ValueError(f"panel dimensions must be positive, got {width}x{height}")

    canvas = np.full((height, width), 255, dtype=np.uint8)
    for comp, av in zip(layout, symbol):
        box = _pixel_box(comp.region, width, height)
        fill = None if comp.outline_only else FILL_PALETTE[av.color_idx]
        if comp.is_grid:
            for cell in mask_cells(av.position_mask):
                _draw_shape(canvas, _cell_box(box, comp, cell), av.type_idx, av.size_idx, fill)
        else:
            _draw_shape(canvas, box, av.type_idx, av.size_idx, fill)
    return Panel.from_array(canvas)
