"""Negative-candidate construction in the two public-dataset styles."""

from __future__ import annotations

import numpy as np

from ..errors import GenerationExhaustedError
from .attributes import (
    ConfigLayout,
    Coordinate,
    PanelSymbol,
    coordinate_domain_size,
    coordinates,
    get_coordinate,
    set_coordinate,
)

_MAX_ATTEMPTS = 64


def _shift_value(
    layout: ConfigLayout, coord: Coordinate, current: int, rng: np.random.Generator
) -> int:
    """Uniform draw from the coordinate's domain excluding ``current``."""
    size = coordinate_domain_size(layout, coord)
    offset = 1 if coord[1] == "layout" else 0  # masks start at 1
    v = offset + int(rng.integers(size - 1))
    if v >= current:
        v += 1
    return v


def gen_negatives_raven(
    correct: PanelSymbol, layout: ConfigLayout, rng: np.random.Generator
) -> tuple[PanelSymbol, ...]:
    """Seven negatives, each one attribute shift away from the correct symbol.

    The shifted coordinate is drawn uniformly, its new value uniformly from
    the remaining domain; duplicates are resampled so all 8 candidates are
    pairwise distinct.
    """
    coords = coordinates(layout)
    negatives: list[PanelSymbol] = []
    for _ in range(7):
        for _ in range(_MAX_ATTEMPTS):
            coord = coords[int(rng.integers(len(coords)))]
            value = _shift_value(layout, coord, get_coordinate(correct, coord), rng)
            candidate = set_coordinate(correct, coord, value)
            if candidate != correct and candidate not in negatives:
                negatives.append(candidate)
                break
        else:
            raise GenerationExhaustedError(
                "could not produce 7 distinct single-shift negatives"
            )
    return tuple(negatives)


def gen_negatives_iraven(
    correct: PanelSymbol, layout: ConfigLayout, rng: np.random.Generator
) -> tuple[PanelSymbol, ...]:
    """Seven negatives from a 3-level bisection tree over 3 distinct attributes.

    Level ``k`` splits every node into an unchanged child and a child with
    attribute ``k`` permuted to a fresh value. Of the 8 leaves exactly one
    (the never-permuted path) equals the correct symbol and is dropped; the
    rest sit at attribute-Hamming distances 1, 2, 3 with multiplicities
    3, 3, 1.
    """
    coords = coordinates(layout)
    if len(coords) < 3:
        raise GenerationExhaustedError(
            f"need at least 3 governed attributes, layout has {len(coords)}"
        )
    picked = [coords[int(i)] for i in rng.choice(len(coords), size=3, replace=False)]

    nodes: list[PanelSymbol] = [correct]
    for coord in picked:
        grown: list[PanelSymbol] = []
        for node in nodes:
            permuted = set_coordinate(
                node, coord, _shift_value(layout, coord, get_coordinate(node, coord), rng)
            )
            grown.extend((node, permuted))
        nodes = grown
    assert nodes[0] == correct
    return tuple(nodes[1:])
