"""Assembly of complete puzzle samples from rules, symbols and renders."""

from __future__ import annotations

import enum

import numpy as np

from ..domain import Panel, Provenance, PuzzleConfiguration, RpmSample
from ..errors import GenerationExhaustedError
from .attributes import (
    AttributeVector,
    PanelSymbol,
    config_layout,
    mask_popcount,
    symbol_to_dict,
)
from .negatives import gen_negatives_iraven, gen_negatives_raven
from .render import render_panel
from .rules import RuleKind, RuleSpec, sample_grid_values, sample_rule_set

_MAX_RETRIES = 64


class NegativeStyle(enum.Enum):
    RAVEN = "raven"
    IRAVEN = "iraven"


def _random_mask(capacity: int, count: int, rng: np.random.Generator) -> int:
    cells = rng.choice(capacity, size=count, replace=False)
    mask = 0
    for c in cells:
        mask |= 1 << int(c)
    return mask


def _fill_grid(
    config: PuzzleConfiguration, rules: RuleSpec, rng: np.random.Generator
) -> list[list[PanelSymbol]]:
    """Populate the 3x3 symbolic grid so every row satisfies every rule."""
    layout = config_layout(config)
    # plane[(ci, attr)][row][col] -> plane value (index, mask or count)
    plane: dict[tuple[int, str], list[tuple[int, int, int]]] = {}
    masks: dict[int, list[list[int]]] = {}
    for ci, comp in enumerate(layout):
        for attr in comp.attributes:
            rule = rules.rule_for((ci, attr))
            rows = sample_grid_values(rule, rng)
            plane[(ci, attr)] = rows
            if attr == "layout":
                if rule.kind in (RuleKind.CONSTANT, RuleKind.DISTRIBUTE_THREE):
                    masks[ci] = [list(r) for r in rows]
                else:
                    masks[ci] = [
                        [_random_mask(comp.capacity, count, rng) for count in r]
                        for r in rows
                    ]

    grid: list[list[PanelSymbol]] = []
    for r in range(3):
        row: list[PanelSymbol] = []
        for c in range(3):
            symbol = []
            for ci, comp in enumerate(layout):
                kwargs = {
                    "type_idx": plane[(ci, "type")][r][c],
                    "size_idx": plane[(ci, "size")][r][c],
                    "color_idx": plane[(ci, "color")][r][c] if comp.has_color else 0,
                }
                if comp.is_grid:
                    mask = masks[ci][r][c]
                    kwargs["position_mask"] = mask
                    kwargs["number_idx"] = mask_popcount(mask) - 1
                symbol.append(AttributeVector(**kwargs))
            row.append(tuple(symbol))
        grid.append(row)
    return grid


def generate_sample(
    config: PuzzleConfiguration,
    style: NegativeStyle,
    width: int,
    height: int,
    rng: np.random.Generator,
) -> tuple[RpmSample, dict]:
    """Generate one sample plus its symbolic annotations.

    The grid is filled row-wise from freshly sampled rules, the eight
    context cells are rendered (cell (3,3) withheld), candidates are the
    rendered correct symbol plus style-specific negatives, shuffled with
    the target position recorded. Deterministic given the stream.
    """
    layout = config_layout(config)
    last_error: Exception | None = None
    for _ in range(_MAX_RETRIES):
        try:
            rules = sample_rule_set(config, rng)
            grid = _fill_grid(config, rules, rng)
            correct = grid[2][2]
            if style is NegativeStyle.RAVEN:
                negatives = gen_negatives_raven(correct, layout, rng)
            else:
                negatives = gen_negatives_iraven(correct, layout, rng)

            context = [
                render_panel(config, grid[r][c], width, height)
                for r in range(3)
                for c in range(3)
                if not (r == 2 and c == 2)
            ]
            correct_panel = render_panel(config, correct, width, height)
            negative_panels = [
                render_panel(config, s, width, height) for s in negatives
            ]
            if any(p.pixels == correct_panel.pixels for p in negative_panels):
                # Symbolically distinct but rendered identically (possible at
                # tiny resolutions); redraw the whole candidate set.
                raise GenerationExhaustedError("negative rendered onto the correct panel")
        except GenerationExhaustedError as exc:
            last_error = exc
            continue

        order: list[PanelSymbol] = [correct, *negatives]
        panels: list[Panel] = [correct_panel, *negative_panels]
        positions = rng.permutation(8)
        candidates: list[Panel | None] = [None] * 8
        symbols: list[PanelSymbol | None] = [None] * 8
        for k in range(8):
            candidates[int(positions[k])] = panels[k]
            symbols[int(positions[k])] = order[k]
        target = int(positions[0])

        sample = RpmSample(
            context=tuple(context),
            candidates=tuple(candidates),
            target=target,
            config=config,
            provenance=Provenance.ORIGINAL,
        )
        annotations = {
            "config": config.value,
            "style": style.value,
            "size": [width, height],
            "rules": rules.to_dict(),
            "grid": [[symbol_to_dict(grid[r][c]) for c in range(3)] for r in range(3)],
            "candidates": [symbol_to_dict(s) for s in symbols],
            "target": target,
        }
        return sample, annotations

    raise GenerationExhaustedError(
        f"sample generation did not converge after {_MAX_RETRIES} retries"
    ) from last_error
