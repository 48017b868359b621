"""Candidate-answer mixup operators.

Two families of per-sample augmentation:

* morphological mixing: each negative candidate is combined with the
  correct answer by a pixel-wise minimum (``gray_or``) or maximum
  (``gray_and``), which by construction introduces no intensity value
  absent from the two inputs;
* vanilla alpha-blending: each negative is linearly interpolated with the
  correct answer using ``lambda ~ Beta(alpha, alpha)``, producing soft
  labels and, in general, brand-new intensity values.

Context panels are never touched; only the candidate set is mixed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .domain import (
    Panel,
    Provenance,
    RpmSample,
    quantize_u8,
    require_valid,
)
from .sampling import sample_lambda


class MixKind(enum.Enum):
    OR = "or"
    AND = "and"
    VANILLA = "vanilla"


class CollisionPolicy(enum.Enum):
    """What to do when a mixed negative collides with the correct answer."""

    KEEP_ORIGINAL = "keep_original"
    KEEP_MIXED = "keep_mixed"


@dataclass(frozen=True)
class MixRecipe:
    """Parameters of one augmentation run."""

    kind: MixKind
    alpha: float = 1.0
    collision_policy: CollisionPolicy = CollisionPolicy.KEEP_ORIGINAL
    seed: int = 0

    def __post_init__(self):
        if not self.alpha > 0.0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed}")


@dataclass(frozen=True)
class MixedCandidate:
    """A mixed panel with its correctness weight (0 for morphological mixes)."""

    panel: Panel
    soft_label: float

    def __post_init__(self):
        if not 0.0 <= self.soft_label <= 1.0:
            raise ValueError(f"soft label {self.soft_label} outside [0, 1]")


def _check_same_shape(i1: Panel, i2: Panel) -> None:
    if not i1.same_shape(i2):
        raise ValueError(
            f"panel dimensions differ: {i1.width}x{i1.height} vs {i2.width}x{i2.height}"
        )


def gray_or(i1: Panel, i2: Panel) -> Panel:
    """Pixel-wise minimum of two equally sized panels.

    On white-background imagery this unions the dark content of both
    inputs, the gray-level analogue of a set OR.
    """
    _check_same_shape(i1, i2)
    return Panel.from_array(np.minimum(i1.to_array(), i2.to_array()))


def gray_and(i1: Panel, i2: Panel) -> Panel:
    """Pixel-wise maximum of two equally sized panels.

    Keeps only dark content present in both inputs, the gray-level
    analogue of a set AND.
    """
    _check_same_shape(i1, i2)
    return Panel.from_array(np.maximum(i1.to_array(), i2.to_array()))


def vanilla_blend(i1: Panel, i2: Panel, lam: float) -> Panel:
    """Linear interpolation ``lam * i1 + (1 - lam) * i2``.

    Evaluated per pixel in double precision, rounded half away from zero
    and clamped to [0, 255].
    """
    _check_same_shape(i1, i2)
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda {lam} outside [0, 1]")
    a = i1.to_array().astype(np.float64)
    b = i2.to_array().astype(np.float64)
    return Panel.from_array(quantize_u8(lam * a + (1.0 - lam) * b))


def is_degenerate(mixed: Panel, correct: Panel) -> bool:
    """True iff the mixed panel is byte-identical to the correct answer."""
    _check_same_shape(mixed, correct)
    return mixed.pixels == correct.pixels


def cam_mix_sample(
    sample: RpmSample,
    kind: MixKind,
    policy: CollisionPolicy = CollisionPolicy.KEEP_ORIGINAL,
) -> RpmSample:
    """Morphologically mix every negative candidate with the correct answer.

    The correct answer, the target index and all context panels pass
    through byte-identical. A mixed negative that collapses onto the
    correct answer is either restored to the input negative
    (``KEEP_ORIGINAL``) or kept and flagged in ``degenerate_negatives``
    (``KEEP_MIXED``).
    """
    if kind not in (MixKind.OR, MixKind.AND):
        raise ValueError(f"morphological mix requires OR or AND, got {kind}")
    require_valid(sample)

    op = gray_or if kind is MixKind.OR else gray_and
    correct = sample.candidates[sample.target]
    mixed: list[Panel] = []
    flagged: list[int] = []
    for i, cand in enumerate(sample.candidates):
        if i == sample.target:
            mixed.append(cand)
            continue
        m = op(cand, correct)
        if is_degenerate(m, correct):
            if policy is CollisionPolicy.KEEP_ORIGINAL:
                m = cand
            else:
                flagged.append(i)
        mixed.append(m)

    return RpmSample(
        context=sample.context,
        candidates=tuple(mixed),
        target=sample.target,
        config=sample.config,
        provenance=Provenance.CAM_OR if kind is MixKind.OR else Provenance.CAM_AND,
        degenerate_negatives=tuple(flagged),
    )


def vanilla_mix_sample(
    sample: RpmSample,
    alpha: float,
    rng: np.random.Generator,
    lambda_values: list[float] | None = None,
) -> tuple[RpmSample, tuple[float, ...]]:
    """Alpha-blend every negative candidate with the correct answer.

    For each negative index ``i`` a fresh ``lambda_i ~ Beta(alpha, alpha)``
    is drawn (ascending index order) and the candidate becomes
    ``vanilla_blend(correct, negative, lambda_i)`` with soft label
    ``lambda_i``; the correct answer keeps soft label 1. Consumers that
    need hard labels treat every blended candidate as negative.

    ``lambda_values`` (7 floats, one per negative in ascending index
    order) bypasses sampling; intended for tests.
    """
    require_valid(sample)
    if not alpha > 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if lambda_values is not None and len(lambda_values) != 7:
        raise ValueError(f"expected 7 lambda overrides, got {len(lambda_values)}")

    correct = sample.candidates[sample.target]
    mixed: list[Panel] = []
    labels: list[float] = []
    neg_pos = 0
    for i, cand in enumerate(sample.candidates):
        if i == sample.target:
            mixed.append(cand)
            labels.append(1.0)
            continue
        if lambda_values is not None:
            lam = lambda_values[neg_pos]
        else:
            lam = sample_lambda(alpha, rng)
        neg_pos += 1
        mixed.append(vanilla_blend(correct, cand, lam))
        labels.append(lam)

    out = RpmSample(
        context=sample.context,
        candidates=tuple(mixed),
        target=sample.target,
        config=sample.config,
        provenance=Provenance.VANILLA,
    )
    return out, tuple(labels)
