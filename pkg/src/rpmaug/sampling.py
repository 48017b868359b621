"""Deterministic random streams and the Beta(alpha, alpha) sampler.

Reproducibility contract
------------------------
Every stochastic step in the package draws from a counter-based Philox
stream keyed by ``(seed, ordinal)``, so sample ``i`` of a batch sees the
same randomness no matter how many workers process the batch or in what
order they run.

The Beta sampler is written against a plain uniform stream so the exact
draw sequence is reproducible from the algorithm description alone:

* standard normal: Box-Muller, ``sqrt(-2 ln u1) * cos(2 pi u2)`` with
  ``u1 = 1 - U`` (two uniforms per normal, cosine branch only);
* Gamma(a), a >= 1: Marsaglia-Tsang squeeze with ``d = a - 1/3``,
  ``c = 1 / sqrt(9 d)``; each trial consumes one normal and one uniform;
* Gamma(a), a < 1: boosted draw ``Gamma(a + 1) * (1 - U) ** (1 / a)``;
* Beta(a, a): ``X / (X + Y)`` for two independent Gamma(a) draws.
"""

from __future__ import annotations

import math

import numpy as np

TWO_PI = 2.0 * math.pi


def substream(seed: int, ordinal: int) -> np.random.Generator:
    """Independent generator for item ``ordinal`` of a batch seeded ``seed``."""
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must fit in 64 unsigned bits, got {seed}")
    if ordinal < 0:
        raise ValueError(f"ordinal must be non-negative, got {ordinal}")
    key = np.array([seed, ordinal], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _standard_normal(rng: np.random.Generator) -> float:
    u1 = 1.0 - rng.random()  # (0, 1]: keeps the log finite
    u2 = rng.random()
    return math.sqrt(-2.0 * math.log(u1)) * math.cos(TWO_PI * u2)


def _gamma_mt(shape: float, rng: np.random.Generator) -> float:
    """One Gamma(shape) draw for shape >= 1 (Marsaglia-Tsang)."""
    d = shape - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    while True:
        x = _standard_normal(rng)
        v = 1.0 + c * x
        if v <= 0.0:
            continue
        v = v * v * v
        u = 1.0 - rng.random()
        if u < 1.0 - 0.0331 * x * x * x * x:
            return d * v
        if math.log(u) < 0.5 * x * x + d * (1.0 - v + math.log(v)):
            return d * v


def _gamma(shape: float, rng: np.random.Generator) -> float:
    if shape >= 1.0:
        return _gamma_mt(shape, rng)
    # Boost: Gamma(a) = Gamma(a + 1) * U^(1/a)
    g = _gamma_mt(shape + 1.0, rng)
    u = 1.0 - rng.random()
    return g * u ** (1.0 / shape)


def sample_lambda(alpha: float, rng: np.random.Generator) -> float:
    """Draw one mixing coefficient from Beta(alpha, alpha).

    Advances ``rng`` deterministically; identical streams give identical
    draw sequences.
    """
    if not (alpha > 0.0) or not math.isfinite(alpha):
        raise ValueError(f"alpha must be a positive finite real, got {alpha}")
    x = _gamma(alpha, rng)
    y = _gamma(alpha, rng)
    total = x + y
    if total == 0.0:
        # Both draws underflowed (only possible for extreme alpha); the
        # symmetric distribution's midpoint is the only defensible value.
        return 0.5
    return x / total


def sample_lambdas(alpha: float, rng: np.random.Generator, count: int) -> list[float]:
    """Draw ``count`` Beta(alpha, alpha) values from one stream."""
    return [sample_lambda(alpha, rng) for _ in range(count)]
