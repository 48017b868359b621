"""Row-wise rules governing puzzle attributes.

Four rule kinds over a finite integer domain ``[lo, hi]``:

* ``CONSTANT``: the three row values are equal;
* ``PROGRESSIVE(step)``: values form an arithmetic progression by
  ``step`` (steps drawn from {-2, -1, +1, +2} where the domain allows);
* ``ARITHMETIC(sign)``: third value = first ``sign`` second;
* ``DISTRIBUTE_THREE(triple)``: each row is a cyclic rotation of a fixed
  triple of distinct values, with the three grid rows using the three
  distinct rotations.

Grid components route their occupancy through the same machinery: a
CONSTANT or DISTRIBUTE_THREE rule acts directly on the cell bitmask,
while PROGRESSIVE and ARITHMETIC act on the entity count (cells are then
re-sampled to match each count).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ..domain import PuzzleConfiguration
from ..errors import DomainOverflowError
from .attributes import (
    COLOR_COUNT,
    SIZE_COUNT,
    TYPE_COUNT,
    ConfigLayout,
    Coordinate,
    config_layout,
)


class RuleKind(enum.Enum):
    CONSTANT = "constant"
    PROGRESSIVE = "progressive"
    ARITHMETIC = "arithmetic"
    DISTRIBUTE_THREE = "distribute_three"


_ADMISSIBLE: dict[str, tuple[RuleKind, ...]] = {
    # Arithmetic on shape identity is meaningless; everything else allows all four.
    "type": (RuleKind.CONSTANT, RuleKind.PROGRESSIVE, RuleKind.DISTRIBUTE_THREE),
    "size": tuple(RuleKind),
    "color": tuple(RuleKind),
    "layout": tuple(RuleKind),
}

_PROGRESSIVE_STEPS = (-2, -1, 1, 2)


@dataclass(frozen=True)
class Rule:
    """One rule instance bound to its attribute's value domain [lo, hi]."""

    kind: RuleKind
    lo: int
    hi: int
    step: int | None = None
    sign: int | None = None
    triple: tuple[int, int, int] | None = None

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty domain [{self.lo}, {self.hi}]")
        if self.kind is RuleKind.PROGRESSIVE:
            if self.step not in _PROGRESSIVE_STEPS:
                raise ValueError(f"progressive step must be in {_PROGRESSIVE_STEPS}")
        elif self.kind is RuleKind.ARITHMETIC:
            if self.sign not in (1, -1):
                raise ValueError("arithmetic sign must be +1 or -1")
        elif self.kind is RuleKind.DISTRIBUTE_THREE:
            if self.triple is None or len(set(self.triple)) != 3:
                raise ValueError("distribute-three needs a triple of distinct values")

    def to_dict(self) -> dict:
        d = {"kind": self.kind.value, "lo": self.lo, "hi": self.hi}
        if self.step is not None:
            d["step"] = self.step
        if self.sign is not None:
            d["sign"] = self.sign
        if self.triple is not None:
            d["triple"] = list(self.triple)
        return d


@dataclass(frozen=True)
class RuleSpec:
    """One rule per governed (component, attribute) coordinate."""

    rules: tuple[tuple[Coordinate, Rule], ...]

    def rule_for(self, coord: Coordinate) -> Rule:
        for c, r in self.rules:
            if c == coord:
                return r
        raise KeyError(coord)

    def to_dict(self) -> list[dict]:
        return [
            {"component": ci, "attribute": attr, **rule.to_dict()}
            for (ci, attr), rule in self.rules
        ]


def _value_domain(attr: str, capacity: int) -> tuple[int, int]:
    """Inclusive [lo, hi] of the plane a rule operates on."""
    if attr == "type":
        return 0, TYPE_COUNT - 1
    if attr == "size":
        return 0, SIZE_COUNT - 1
    if attr == "color":
        return 0, COLOR_COUNT - 1
    if attr == "layout":
        # CONSTANT / DISTRIBUTE_THREE govern masks, the rest govern counts;
        # the rule's bound domain reflects the kind (set by the sampler).
        raise ValueError("layout domains depend on the rule kind; use _layout_domain")
    raise ValueError(f"unknown attribute {attr!r}")


def _layout_domain(kind: RuleKind, capacity: int) -> tuple[int, int]:
    if kind in (RuleKind.CONSTANT, RuleKind.DISTRIBUTE_THREE):
        return 1, 2**capacity - 1  # masks
    return 1, capacity  # entity counts


def _feasible_steps(lo: int, hi: int) -> list[int]:
    return [s for s in _PROGRESSIVE_STEPS if hi - lo >= 2 * abs(s)]


def _sample_rule(attr: str, capacity: int, rng: np.random.Generator) -> Rule:
    kinds = list(_ADMISSIBLE[attr])
    kind = kinds[int(rng.integers(len(kinds)))]
    if attr == "layout":
        lo, hi = _layout_domain(kind, capacity)
    else:
        lo, hi = _value_domain(attr, capacity)
    if kind is RuleKind.CONSTANT:
        return Rule(kind, lo, hi)
    if kind is RuleKind.PROGRESSIVE:
        steps = _feasible_steps(lo, hi)
        return Rule(kind, lo, hi, step=steps[int(rng.integers(len(steps)))])
    if kind is RuleKind.ARITHMETIC:
        sign = 1 if int(rng.integers(2)) == 0 else -1
        return Rule(kind, lo, hi, sign=sign)
    values = rng.choice(np.arange(lo, hi + 1), size=3, replace=False)
    return Rule(kind, lo, hi, triple=tuple(int(v) for v in values))


def sample_rule_set(config: PuzzleConfiguration, rng: np.random.Generator) -> RuleSpec:
    """Draw one admissible rule (with parameters) per governed coordinate."""
    layout = config_layout(config)
    rules: list[tuple[Coordinate, Rule]] = []
    for ci, comp in enumerate(layout):
        for attr in comp.attributes:
            rules.append(((ci, attr), _sample_rule(attr, comp.capacity, rng)))
    return RuleSpec(tuple(rules))


def apply_rule(rule: Rule, row: tuple) -> tuple[int, int, int]:
    """Complete a partially populated row of 3 values under ``rule``.

    CONSTANT, PROGRESSIVE and DISTRIBUTE_THREE need the first entry;
    ARITHMETIC needs the first two. Values escaping the rule's domain
    raise :class:`DomainOverflowError` so the caller can resample.
    """
    if len(row) != 3:
        raise ValueError(f"row must have 3 entries, got {len(row)}")

    def check(v: int) -> int:
        if not rule.lo <= v <= rule.hi:
            raise DomainOverflowError(
                f"value {v} escapes domain [{rule.lo}, {rule.hi}] under {rule.kind.value}"
            )
        return v

    if rule.kind is RuleKind.CONSTANT:
        v = check(row[0])
        return (v, v, v)
    if rule.kind is RuleKind.PROGRESSIVE:
        v = check(row[0])
        return (v, check(v + rule.step), check(v + 2 * rule.step))
    if rule.kind is RuleKind.ARITHMETIC:
        if row[0] is None or row[1] is None:
            raise ValueError("arithmetic rule needs the first two entries")
        a, b = check(row[0]), check(row[1])
        return (a, b, check(a + rule.sign * b))
    # DISTRIBUTE_THREE: the first value selects the rotation.
    v = row[0]
    if v not in rule.triple:
        raise DomainOverflowError(f"value {v} is not in the fixed triple {rule.triple}")
    i = rule.triple.index(v)
    return (v, rule.triple[(i + 1) % 3], rule.triple[(i + 2) % 3])


def rule_satisfied(rule: Rule, row: tuple[int, int, int]) -> bool:
    """Post-hoc check that a complete row obeys ``rule``."""
    if rule.kind is RuleKind.CONSTANT:
        return row[0] == row[1] == row[2]
    if rule.kind is RuleKind.PROGRESSIVE:
        return row[1] - row[0] == rule.step and row[2] - row[1] == rule.step
    if rule.kind is RuleKind.ARITHMETIC:
        return row[2] == row[0] + rule.sign * row[1]
    rotations = {
        (rule.triple[i], rule.triple[(i + 1) % 3], rule.triple[(i + 2) % 3])
        for i in range(3)
    }
    return tuple(row) in rotations


def sample_grid_values(rule: Rule, rng: np.random.Generator) -> list[tuple[int, int, int]]:
    """Draw the 3x3 plane values of one attribute, one tuple per grid row."""
    if rule.kind is RuleKind.DISTRIBUTE_THREE:
        order = rng.permutation(3)
        return [apply_rule(rule, (rule.triple[int(i)], None, None)) for i in order]
    if rule.kind is RuleKind.CONSTANT:
        return [
            apply_rule(rule, (int(rng.integers(rule.lo, rule.hi + 1)), None, None))
            for _ in range(3)
        ]
    if rule.kind is RuleKind.PROGRESSIVE:
        starts = [
            v
            for v in range(rule.lo, rule.hi + 1)
            if rule.lo <= v + 2 * rule.step <= rule.hi
        ]
        return [
            apply_rule(rule, (starts[int(rng.integers(len(starts)))], None, None))
            for _ in range(3)
        ]
    # ARITHMETIC: pick uniformly among feasible (first, second) pairs.
    pairs = [
        (a, b)
        for a in range(rule.lo, rule.hi + 1)
        for b in range(rule.lo, rule.hi + 1)
        if rule.lo <= a + rule.sign * b <= rule.hi
    ]
    rows = []
    for _ in range(3):
        a, b = pairs[int(rng.integers(len(pairs)))]
        rows.append(apply_rule(rule, (a, b, None)))
    return rows
