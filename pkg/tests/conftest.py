"""Shared fixtures: small generated datasets reused across test modules."""

from __future__ import annotations

import numpy as np
import pytest

from rpmaug.domain import Panel, Provenance, PuzzleConfiguration, RpmSample
from rpmaug.puzzle import NegativeStyle, generate_sample
from rpmaug.sampling import substream


def random_panel(rng: np.random.Generator, width: int, height: int) -> Panel:
    return Panel.from_array(
        rng.integers(0, 256, size=(height, width), dtype=np.uint8)
    )


def make_sample(
    rng: np.random.Generator,
    width: int = 8,
    height: int = 8,
    target: int = 3,
    config: PuzzleConfiguration = PuzzleConfiguration.CENTER,
) -> RpmSample:
    """A structurally valid sample with random pixel content."""
    while True:
        candidates = tuple(random_panel(rng, width, height) for _ in range(8))
        if len({c.pixels for c in candidates}) == 8:
            break
    return RpmSample(
        context=tuple(random_panel(rng, width, height) for _ in range(8)),
        candidates=candidates,
        target=target,
        config=config,
        provenance=Provenance.ORIGINAL,
    )


@pytest.fixture(scope="session")
def generated_samples():
    """One generated sample per (configuration, style), with annotations."""
    out = {}
    for config in PuzzleConfiguration:
        for style in NegativeStyle:
            rng = substream(11, 0)
            out[(config, style)] = generate_sample(config, style, 80, 80, rng)
    return out
