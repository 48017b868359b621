"""Validation of augmentation claims and dataset statistics.

The central check here is pixel-value closure: a morphologically mixed
candidate may only contain intensities taken from the two panels it was
mixed from, so the global intensity set never grows. Alpha-blending has
no such guarantee, which the same check demonstrates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import Dataset, Provenance, PuzzleConfiguration, RpmSample, validate_sample


@dataclass(frozen=True)
class ClosureReport:
    """Aggregate result of checking augmented samples against their sources."""

    samples_checked: int
    closure_violations: int
    degenerate_candidates: int
    value_set_before: tuple[int, ...]
    value_set_after: tuple[int, ...]

    def __post_init__(self):
        if self.closure_violations > self.samples_checked * 7:
            raise ValueError("more violations than candidates checked")


def _sample_value_set(sample: RpmSample) -> set[int]:
    values: set[int] = set()
    for p in sample.context + sample.candidates:
        values.update(np.unique(p.to_array()).tolist())
    return values


def _check_aligned(orig: RpmSample, aug: RpmSample, ordinal: int) -> None:
    if aug.target != orig.target:
        raise ValueError(f"sample {ordinal}: target differs between datasets")
    if aug.config != orig.config:
        raise ValueError(f"sample {ordinal}: configuration differs between datasets")
    if len(orig.candidates) != 8 or len(aug.candidates) != 8:
        raise ValueError(f"sample {ordinal}: candidate count is not 8")
    if [p.pixels for p in aug.context] != [p.pixels for p in orig.context]:
        raise ValueError(f"sample {ordinal}: context panels differ between datasets")


def check_closure(original: Dataset, augmented: Dataset) -> ClosureReport:
    """Verify per-pixel membership of augmented candidates in their sources.

    Datasets must be aligned by ordinal (augmented sample i derives from
    original sample i). Every non-original candidate is checked pixel-wise
    against {negative pixel, correct pixel}; degenerate duplicates of the
    correct answer are counted separately. Global intensity value sets of
    both datasets are aggregated for the closure comparison.
    """
    if len(original.samples) != len(augmented.samples):
        raise ValueError(
            f"dataset sizes differ: {len(original.samples)} vs {len(augmented.samples)}"
        )

    violations = 0
    degenerate = 0
    before: set[int] = set()
    after: set[int] = set()
    for ordinal, (orig, aug) in enumerate(zip(original.samples, augmented.samples)):
        _check_aligned(orig, aug, ordinal)
        before |= _sample_value_set(orig)
        after |= _sample_value_set(aug)
        if aug.provenance is Provenance.ORIGINAL:
            continue
        correct = orig.candidates[orig.target].to_array()
        for i in range(8):
            if i == aug.target:
                continue
            source = orig.candidates[i].to_array()
            mixed = aug.candidates[i].to_array()
            member = (mixed == source) | (mixed == correct)
            if not member.all():
                violations += 1
            if aug.candidates[i].pixels == orig.candidates[orig.target].pixels:
                degenerate += 1

    return ClosureReport(
        samples_checked=len(augmented.samples),
        closure_violations=violations,
        degenerate_candidates=degenerate,
        value_set_before=tuple(sorted(before)),
        value_set_after=tuple(sorted(after)),
    )


@dataclass(frozen=True)
class DatasetStats:
    """Exact counts for one dataset split, in stable field order."""

    split: str
    total: int
    per_config: tuple[tuple[str, int], ...]
    target_histogram: tuple[int, ...]
    provenance_histogram: tuple[tuple[str, int], ...]
    invalid_samples: int

    def to_dict(self) -> dict:
        return {
            "split": self.split,
            "total": self.total,
            "per_config": dict(self.per_config),
            "target_histogram": list(self.target_histogram),
            "provenance_histogram": dict(self.provenance_histogram),
            "invalid_samples": self.invalid_samples,
        }


def dataset_stats(dataset: Dataset) -> DatasetStats:
    """Count samples by configuration, target index and provenance."""
    config_counts = {c.value: 0 for c in PuzzleConfiguration}
    prov_counts = {p.value: 0 for p in Provenance}
    target_hist = [0] * 8
    invalid = 0
    for s in dataset.samples:
        config_counts[s.config.value] += 1
        prov_counts[s.provenance.value] += 1
        if 0 <= s.target < 8:
            target_hist[s.target] += 1
        if validate_sample(s):
            invalid += 1
    return DatasetStats(
        split=dataset.split.value,
        total=len(dataset.samples),
        per_config=tuple(config_counts.items()),
        target_histogram=tuple(target_hist),
        provenance_histogram=tuple(prov_counts.items()),
        invalid_samples=invalid,
    )
