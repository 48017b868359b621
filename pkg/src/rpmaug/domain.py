"""Core domain types for RPM samples and panel-level preprocessing.

A sample is the classic "find the missing image" puzzle: 8 context panels
(the 3x3 question matrix minus its last cell) plus 8 candidate answer
panels, exactly one of which is correct.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import InvalidSampleError


class PuzzleConfiguration(enum.Enum):
    """The seven admissible spatial layouts of a puzzle panel."""

    CENTER = "center"
    GRID2X2 = "grid2x2"
    GRID3X3 = "grid3x3"
    LEFT_RIGHT = "left_right"
    UP_DOWN = "up_down"
    OUT_IN_CENTER = "out_in_center"
    OUT_IN_GRID = "out_in_grid"


class Provenance(enum.Enum):
    """How a sample came to exist."""

    ORIGINAL = "original"
    CAM_OR = "cam_or"
    CAM_AND = "cam_and"
    VANILLA = "vanilla"


class Split(enum.Enum):
    TRAIN = "train"
    VAL = "val"
    TEST = "test"


@dataclass(frozen=True)
class Panel:
    """A single gray-scale image cell.

    Pixels are row-major unsigned 8-bit intensities, 0 = black and
    255 = white background. Instances are immutable values.
    """

    width: int
    height: int
    pixels: bytes

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError(
                f"panel dimensions must be positive, got {self.width}x{self.height}"
            )
        if len(self.pixels) != self.width * self.height:
            raise ValueError(
                f"pixel buffer has {len(self.pixels)} bytes, "
                f"expected {self.width * self.height}"
            )

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "Panel":
        """Build a panel from a 2-D uint8 array (rows, cols)."""
        a = np.asarray(arr)
        if a.ndim != 2:
            raise ValueError(f"expected a 2-D array, got ndim={a.ndim}")
        if a.dtype != np.uint8:
            raise ValueError(f"expected uint8 pixels, got {a.dtype}")
        return cls(width=a.shape[1], height=a.shape[0], pixels=a.tobytes())

    def to_array(self) -> np.ndarray:
        """Return the pixels as a read-only (height, width) uint8 array."""
        return np.frombuffer(self.pixels, dtype=np.uint8).reshape(
            self.height, self.width
        )

    def same_shape(self, other: "Panel") -> bool:
        return self.width == other.width and self.height == other.height


@dataclass(frozen=True)
class RpmSample:
    """One puzzle: 8 context panels, 8 candidates, and the answer index.

    The constructor is permissive; use :func:`validate_sample` to check
    invariants (violations are data, not construction failures).
    ``degenerate_negatives`` records candidate indices that an augmentation
    step knowingly left byte-identical to the correct answer.
    """

    context: tuple[Panel, ...]
    candidates: tuple[Panel, ...]
    target: int
    config: PuzzleConfiguration
    provenance: Provenance = Provenance.ORIGINAL
    degenerate_negatives: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "context", tuple(self.context))
        object.__setattr__(self, "candidates", tuple(self.candidates))
        object.__setattr__(
            self, "degenerate_negatives", tuple(self.degenerate_negatives)
        )


@dataclass(frozen=True)
class Dataset:
    """An ordered collection of samples belonging to one split."""

    samples: tuple[RpmSample, ...]
    split: Split

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(self.samples))

    def __len__(self) -> int:
        return len(self.samples)


@dataclass(frozen=True)
class Violation:
    """One violated sample invariant, with a machine-readable code."""

    code: str
    detail: str


def validate_sample(sample: RpmSample) -> list[Violation]:
    """Check every RpmSample invariant; return the violations (empty = valid).

    Never mutates or raises on bad data: a malformed sample is an
    observation, not an exception.
    """
    out: list[Violation] = []
    if len(sample.context) != 8:
        out.append(
            Violation("CONTEXT_COUNT", f"expected 8 context panels, got {len(sample.context)}")
        )
    if len(sample.candidates) != 8:
        out.append(
            Violation(
                "CANDIDATE_COUNT", f"expected 8 candidate panels, got {len(sample.candidates)}"
            )
        )
    panels = list(sample.context) + list(sample.candidates)
    if panels:
        w, h = panels[0].width, panels[0].height
        for idx, p in enumerate(panels):
            if p.width != w or p.height != h:
                out.append(
                    Violation(
                        "PANEL_SHAPE",
                        f"panel {idx} is {p.width}x{p.height}, expected {w}x{h}",
                    )
                )
                break
    if not 0 <= sample.target < 8:
        out.append(Violation("TARGET_RANGE", f"target {sample.target} outside [0, 8)"))
    elif sample.target < len(sample.candidates):
        correct = sample.candidates[sample.target]
        for i, c in enumerate(sample.candidates):
            if i != sample.target and c == correct:
                out.append(
                    Violation(
                        "DUPLICATE_CORRECT",
                        f"candidate {i} is byte-identical to the correct answer",
                    )
                )
    return out


def require_valid(sample: RpmSample) -> None:
    """Raise InvalidSampleError (with report attached) if the sample is bad."""
    report = validate_sample(sample)
    if report:
        codes = ", ".join(v.code for v in report)
        raise InvalidSampleError(f"invalid sample: {codes}", report)


def quantize_u8(values: np.ndarray) -> np.ndarray:
    """Round half away from zero and clamp to the 8-bit range.

    Inputs are non-negative in practice, so this is floor(v + 0.5).
    """
    return np.clip(np.floor(values + 0.5), 0.0, 255.0).astype(np.uint8)


def resize_panel(panel: Panel, target_w: int, target_h: int) -> Panel:
    """Resize with bilinear interpolation on half-pixel-aligned centers.

    Output pixel (i, j) samples the source at
    ``x = (j + 0.5) * (w_in / w_out) - 0.5`` (and likewise for y), with the
    coordinate clamped into ``[0, w_in - 1]``; the four-neighbour blend is
    evaluated in double precision as
    ``(1-fy) * ((1-fx)*v00 + fx*v01) + fy * ((1-fx)*v10 + fx*v11)``
    and rounded half away from zero to 8 bits. An identity resize
    short-circuits to a byte copy.
    """
    if target_w <= 0 or target_h <= 0:
        raise ValueError(f"target dimensions must be positive, got {target_w}x{target_h}")
    if target_w == panel.width and target_h == panel.height:
        return Panel(panel.width, panel.height, panel.pixels)

    src = panel.to_array().astype(np.float64)
    xs = np.arange(target_w, dtype=np.float64)
    ys = np.arange(target_h, dtype=np.float64)
    x = (xs + 0.5) * (panel.width / target_w) - 0.5
    y = (ys + 0.5) * (panel.height / target_h) - 0.5
    x = np.minimum(np.maximum(x, 0.0), panel.width - 1)
    y = np.minimum(np.maximum(y, 0.0), panel.height - 1)

    x0 = np.floor(x).astype(np.int64)
    y0 = np.floor(y).astype(np.int64)
    x1 = np.minimum(x0 + 1, panel.width - 1)
    y1 = np.minimum(y0 + 1, panel.height - 1)
    fx = x - x0
    fy = y - y0

    v00 = src[y0[:, None], x0[None, :]]
    v01 = src[y0[:, None], x1[None, :]]
    v10 = src[y1[:, None], x0[None, :]]
    v11 = src[y1[:, None], x1[None, :]]
    fxr = fx[None, :]
    fyr = fy[:, None]
    blended = (1.0 - fyr) * ((1.0 - fxr) * v00 + fxr * v01) + fyr * (
        (1.0 - fxr) * v10 + fxr * v11
    )
    return Panel.from_array(quantize_u8(blended))
