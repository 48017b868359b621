"""Symbolic attribute vectors and per-configuration component layouts.

A panel's content is described by one :class:`AttributeVector` per
component. Single-entity components carry (type, size, color); grid
components additionally carry a cell-occupancy bitmask whose population
is the entity count. Out-In outer rings are drawn outline-only and do
not govern color.

For negative-candidate construction the symbolic description is viewed
as a flat coordinate tuple. The occupancy mask counts as one coordinate:
changing the entity count necessarily changes the occupied cells, so
count and placement together form a single degree of freedom.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..domain import PuzzleConfiguration

SHAPE_NAMES = ("triangle", "square", "pentagon", "hexagon", "circle")
SIZE_SCALES = (0.40, 0.55, 0.70, 0.85, 1.00)
FILL_PALETTE = (40, 75, 110, 145, 180, 215)

TYPE_COUNT = len(SHAPE_NAMES)
SIZE_COUNT = len(SIZE_SCALES)
COLOR_COUNT = len(FILL_PALETTE)


@dataclass(frozen=True)
class AttributeVector:
    """Symbolic description of one component of one panel.

    ``number_idx`` and ``position_mask`` are set together for grid
    components (count = ``number_idx + 1`` = population of the mask) and
    are both ``None`` otherwise.
    """

    type_idx: int
    size_idx: int
    color_idx: int
    number_idx: int | None = None
    position_mask: int | None = None

    def __post_init__(self):
        if not 0 <= self.type_idx < TYPE_COUNT:
            raise ValueError(f"type_idx {self.type_idx} outside [0, {TYPE_COUNT})")
        if not 0 <= self.size_idx < SIZE_COUNT:
            raise ValueError(f"size_idx {self.size_idx} outside [0, {SIZE_COUNT})")
        if not 0 <= self.color_idx < COLOR_COUNT:
            raise ValueError(f"color_idx {self.color_idx} outside [0, {COLOR_COUNT})")
        if (self.number_idx is None) != (self.position_mask is None):
            raise ValueError("number_idx and position_mask must be set together")
        if self.position_mask is not None:
            if self.position_mask < 1:
                raise ValueError("position_mask must have at least one occupied cell")
            if mask_popcount(self.position_mask) != self.number_idx + 1:
                raise ValueError(
                    f"mask population {mask_popcount(self.position_mask)} does not "
                    f"match count {self.number_idx + 1}"
                )


@dataclass(frozen=True)
class ComponentSpec:
    """Geometry and governed attributes of one panel component."""

    name: str
    region: tuple[float, float, float, float]  # x0, y0, x1, y1 fractions
    grid_rows: int = 1
    grid_cols: int = 1
    has_color: bool = True
    outline_only: bool = False

    @property
    def capacity(self) -> int:
        return self.grid_rows * self.grid_cols

    @property
    def is_grid(self) -> bool:
        return self.capacity > 1

    @property
    def attributes(self) -> tuple[str, ...]:
        attrs = ["type", "size"]
        if self.has_color:
            attrs.append("color")
        if self.is_grid:
            attrs.append("layout")
        return tuple(attrs)


ConfigLayout = tuple[ComponentSpec, ...]
PanelSymbol = tuple[AttributeVector, ...]
Coordinate = tuple[int, str]

_FULL = (0.0, 0.0, 1.0, 1.0)
_INNER = (0.28, 0.28, 0.72, 0.72)

_LAYOUTS: dict[PuzzleConfiguration, ConfigLayout] = {
    PuzzleConfiguration.CENTER: (ComponentSpec("main", _FULL),),
    PuzzleConfiguration.GRID2X2: (
        ComponentSpec("main", _FULL, grid_rows=2, grid_cols=2),
    ),
    PuzzleConfiguration.GRID3X3: (
        ComponentSpec("main", _FULL, grid_rows=3, grid_cols=3),
    ),
    PuzzleConfiguration.LEFT_RIGHT: (
        ComponentSpec("left", (0.0, 0.18, 0.5, 0.82)),
        ComponentSpec("right", (0.5, 0.18, 1.0, 0.82)),
    ),
    PuzzleConfiguration.UP_DOWN: (
        ComponentSpec("top", (0.18, 0.0, 0.82, 0.5)),
        ComponentSpec("bottom", (0.18, 0.5, 0.82, 1.0)),
    ),
    PuzzleConfiguration.OUT_IN_CENTER: (
        ComponentSpec("outer", _FULL, has_color=False, outline_only=True),
        ComponentSpec("inner", _INNER),
    ),
    PuzzleConfiguration.OUT_IN_GRID: (
        ComponentSpec("outer", _FULL, has_color=False, outline_only=True),
        ComponentSpec("inner", _INNER, grid_rows=2, grid_cols=2),
    ),
}


def config_layout(config: PuzzleConfiguration) -> ConfigLayout:
    return _LAYOUTS[config]


def mask_popcount(mask: int) -> int:
    return bin(mask).count("1")


def coordinates(layout: ConfigLayout) -> tuple[Coordinate, ...]:
    """Flat list of governed (component, attribute) coordinates."""
    out: list[Coordinate] = []
    for ci, comp in enumerate(layout):
        out.extend((ci, attr) for attr in comp.attributes)
    return tuple(out)


def coordinate_domain_size(layout: ConfigLayout, coord: Coordinate) -> int:
    ci, attr = coord
    if attr == "type":
        return TYPE_COUNT
    if attr == "size":
        return SIZE_COUNT
    if attr == "color":
        return COLOR_COUNT
    if attr == "layout":
        return 2 ** layout[ci].capacity - 1
    raise ValueError(f"unknown attribute {attr!r}")


def get_coordinate(symbol: PanelSymbol, coord: Coordinate):
    ci, attr = coord
    av = symbol[ci]
    if attr == "type":
        return av.type_idx
    if attr == "size":
        return av.size_idx
    if attr == "color":
        return av.color_idx
    if attr == "layout":
        return av.position_mask
    raise ValueError(f"unknown attribute {attr!r}")


def set_coordinate(symbol: PanelSymbol, coord: Coordinate, value: int) -> PanelSymbol:
    """Return a copy of ``symbol`` with one coordinate replaced."""
    ci, attr = coord
    av = symbol[ci]
    if attr == "type":
        av = AttributeVector(value, av.size_idx, av.color_idx, av.number_idx, av.position_mask)
    elif attr == "size":
        av = AttributeVector(av.type_idx, value, av.color_idx, av.number_idx, av.position_mask)
    elif attr == "color":
        av = AttributeVector(av.type_idx, av.size_idx, value, av.number_idx, av.position_mask)
    elif attr == "layout":
        av = AttributeVector(
            av.type_idx, av.size_idx, av.color_idx, mask_popcount(value) - 1, value
        )
    else:
        raise ValueError(f"unknown attribute {attr!r}")
    return symbol[:ci] + (av,) + symbol[ci + 1 :]


def hamming_distance(a: PanelSymbol, b: PanelSymbol, layout: ConfigLayout) -> int:
    """Number of governed coordinates on which two symbols differ."""
    if len(a) != len(layout) or len(b) != len(layout):
        raise ValueError("symbol does not match the layout's component count")
    return sum(
        1 for coord in coordinates(layout) if get_coordinate(a, coord) != get_coordinate(b, coord)
    )


def mask_cells(mask: int) -> list[int]:
    """Sorted indices of the occupied cells of a mask."""
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def symbol_to_dict(symbol: PanelSymbol) -> list[dict]:
    """JSON-ready form of a panel symbol (one dict per component)."""
    out = []
    for av in symbol:
        d = {"type": av.type_idx, "size": av.size_idx, "color": av.color_idx}
        if av.position_mask is not None:
            d["number"] = av.number_idx
            d["positions"] = mask_cells(av.position_mask)
        out.append(d)
    return out


def symbol_from_dict(data: list[dict]) -> PanelSymbol:
    """Inverse of :func:`symbol_to_dict`."""
    out = []
    for d in data:
        if "positions" in d:
            mask = 0
            for cell in d["positions"]:
                mask |= 1 << int(cell)
            out.append(
                AttributeVector(d["type"], d["size"], d["color"], int(d["number"]), mask)
            )
        else:
            out.append(AttributeVector(d["type"], d["size"], d["color"]))
    return tuple(out)
