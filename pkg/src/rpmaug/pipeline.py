"""Batch operations over dataset directories.

All batch work is keyed by sample ordinal: item ``i`` of a run derives its
randomness from ``substream(seed, i)``, so outputs are byte-identical for
any worker count. Workers only ever touch distinct output files.
"""

from __future__ import annotations

import json
import shutil
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .analysis import check_closure, dataset_stats
from .archive import (
    DatasetEntry,
    read_sample_archive,
    sample_filename,
    scan_dataset,
    write_sample_archive,
)
from .domain import (
    Dataset,
    Provenance,
    PuzzleConfiguration,
    RpmSample,
    Split,
    resize_panel,
    validate_sample,
)
from .mixup import MixKind, MixRecipe, cam_mix_sample, vanilla_mix_sample
from .puzzle import NegativeStyle, generate_sample
from .sampling import substream

SOFT_LABEL_MEMBER = "soft_labels.json"
SYMBOLIC_MEMBER = "symbolic.json"


def generate_dataset(
    out_dir: str | Path,
    configs: list[PuzzleConfiguration],
    count: int,
    seed: int,
    style: NegativeStyle,
    size: tuple[int, int],
    split: Split,
) -> dict:
    """Write ``count`` generated samples, cycling through ``configs``.

    Sample ``i`` is deterministic under ``(seed, i)`` and lands in
    ``<out>/<config>/RAVEN_<i:06d>_<split>.npz`` with its symbolic
    annotations attached as an auxiliary member.
    """
    out_dir = Path(out_dir)
    width, height = size
    written = {c.value: 0 for c in configs}
    for i in range(count):
        config = configs[i % len(configs)]
        rng = substream(seed, i)
        sample, annotations = generate_sample(config, style, width, height, rng)
        aux = {SYMBOLIC_MEMBER: json.dumps(annotations, sort_keys=True).encode("utf-8")}
        path = out_dir / config.value / sample_filename(f"{i:06d}", split)
        write_sample_archive(sample, aux, path)
        written[config.value] += 1
    return {
        "command": "generate",
        "split": split.value,
        "style": style.value,
        "size": [width, height],
        "seed": seed,
        "written": count,
        "per_config": written,
        "out": str(out_dir),
    }


def _augment_one(
    entry: DatasetEntry, ordinal: int, out_dir: Path, recipe: MixRecipe
) -> None:
    sample, aux = read_sample_archive(entry.path)
    if recipe.kind is MixKind.VANILLA:
        mixed, labels = vanilla_mix_sample(
            sample, recipe.alpha, substream(recipe.seed, ordinal)
        )
        aux = dict(aux)
        aux[SOFT_LABEL_MEMBER] = json.dumps(list(labels)).encode("utf-8")
    else:
        mixed = cam_mix_sample(sample, recipe.kind, recipe.collision_policy)
    out_path = (
        out_dir
        / entry.config.value
        / sample_filename(f"{entry.sample_id}_aug", entry.split)
    )
    write_sample_archive(mixed, aux, out_path)


def augment_dataset(
    in_dir: str | Path,
    out_dir: str | Path,
    recipe: MixRecipe,
    *,
    splits: set[Split] = frozenset({Split.TRAIN}),
    jobs: int = 1,
    force_splits: bool = False,
) -> dict:
    """Copy a dataset and add one augmented archive per selected original.

    Files of non-selected splits are copied through byte-identical.
    Augmenting evaluation splits is refused unless ``force_splits`` is set;
    nothing under ``in_dir`` is ever modified.
    """
    in_dir, out_dir = Path(in_dir), Path(out_dir)
    forbidden = {s for s in splits if s is not Split.TRAIN}
    if forbidden and not force_splits:
        raise ValueError(
            f"refusing to augment evaluation splits "
            f"{sorted(s.value for s in forbidden)}; pass force_splits to override"
        )

    scan = scan_dataset(in_dir)
    selected = [e for e in scan.entries if e.split in splits]
    passthrough = [e for e in scan.entries if e.split not in splits]

    for entry in passthrough + selected:
        dest = out_dir / entry.path.relative_to(in_dir)
        dest.parent.mkdir(parents=True, exist_ok=True)
        shutil.copyfile(entry.path, dest)

    def work(args: tuple[int, DatasetEntry]) -> None:
        ordinal, entry = args
        _augment_one(entry, ordinal, out_dir, recipe)

    tasks = list(enumerate(selected))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            list(pool.map(work, tasks))
    else:
        for t in tasks:
            work(t)

    return {
        "command": "augment",
        "op": recipe.kind.value,
        "alpha": recipe.alpha,
        "collision": recipe.collision_policy.value,
        "splits": sorted(s.value for s in splits),
        "originals": len(selected),
        "synthetic": len(selected),
        "copied_passthrough": len(passthrough),
        "seed": recipe.seed,
        "out": str(out_dir),
    }


def resize_dataset(in_dir: str | Path, out_dir: str | Path, size: tuple[int, int]) -> dict:
    """Re-write every archive with all 16 panels resized to ``size``."""
    in_dir, out_dir = Path(in_dir), Path(out_dir)
    width, height = size
    scan = scan_dataset(in_dir)
    for entry in scan.entries:
        sample, aux = read_sample_archive(entry.path)
        resized = RpmSample(
            context=tuple(resize_panel(p, width, height) for p in sample.context),
            candidates=tuple(resize_panel(p, width, height) for p in sample.candidates),
            target=sample.target,
            config=sample.config,
            provenance=sample.provenance,
            degenerate_negatives=sample.degenerate_negatives,
        )
        write_sample_archive(resized, aux, out_dir / entry.path.relative_to(in_dir))
    return {
        "command": "resize",
        "size": [width, height],
        "written": len(scan.entries),
        "out": str(out_dir),
    }


def _load_entries(entries: list[DatasetEntry]) -> list[tuple[DatasetEntry, RpmSample]]:
    return [(e, read_sample_archive(e.path)[0]) for e in entries]


def validate_directory(in_dir: str | Path, against: str | Path | None = None) -> dict:
    """Validate every sample and closure-check augmented/original pairs.

    Augmented archives (``<id>_aug``) pair with the same base id in
    ``against`` (or in ``in_dir`` itself when omitted). The morphological
    recipes must show zero closure violations; blend recipes are reported
    but expected to violate.
    """
    in_dir = Path(in_dir)
    scan = scan_dataset(in_dir)
    loaded = _load_entries(list(scan.entries))

    invalid = []
    for entry, sample in loaded:
        report = validate_sample(sample)
        if report:
            invalid.append(
                {"path": str(entry.path), "codes": sorted({v.code for v in report})}
            )

    source_scan = scan_dataset(against) if against is not None else scan
    originals: dict[tuple[str, str, str], DatasetEntry] = {
        (e.config.value, e.split.value, e.sample_id): e
        for e in source_scan.entries
        if not e.sample_id.endswith("_aug")
    }

    groups: dict[tuple[str, str], list[tuple[RpmSample, RpmSample]]] = {}
    unpaired = 0
    for entry, sample in loaded:
        if not entry.sample_id.endswith("_aug"):
            continue
        base = entry.sample_id[: -len("_aug")]
        origin = originals.get((entry.config.value, entry.split.value, base))
        if origin is None:
            unpaired += 1
            continue
        orig_sample, _ = read_sample_archive(origin.path)
        key = (sample.provenance.value, entry.split.value)
        groups.setdefault(key, []).append((orig_sample, sample))

    closure: dict[str, dict] = {}
    for (prov, split), pairs in sorted(groups.items()):
        report = check_closure(
            Dataset(tuple(o for o, _ in pairs), Split(split)),
            Dataset(tuple(a for _, a in pairs), Split(split)),
        )
        agg = closure.setdefault(
            prov,
            {
                "samples_checked": 0,
                "closure_violations": 0,
                "degenerate_candidates": 0,
            },
        )
        agg["samples_checked"] += report.samples_checked
        agg["closure_violations"] += report.closure_violations
        agg["degenerate_candidates"] += report.degenerate_candidates

    morphological_violations = sum(
        closure[p]["closure_violations"]
        for p in (Provenance.CAM_OR.value, Provenance.CAM_AND.value)
        if p in closure
    )
    ok = not invalid and morphological_violations == 0
    return {
        "command": "validate",
        "samples": len(loaded),
        "invalid_samples": len(invalid),
        "invalid": invalid[:20],
        "unpaired_augmented": unpaired,
        "closure": closure,
        "skipped_files": scan.skipped,
        "ok": ok,
    }


def stats_directory(in_dir: str | Path) -> dict:
    """Per-split dataset statistics for a directory tree."""
    scan = scan_dataset(Path(in_dir))
    by_split: dict[Split, list[RpmSample]] = {s: [] for s in Split}
    for entry in scan.entries:
        sample, _ = read_sample_archive(entry.path)
        by_split[entry.split].append(sample)

    splits = {}
    for split in (Split.TRAIN, Split.VAL, Split.TEST):
        samples = by_split[split]
        splits[split.value] = dataset_stats(Dataset(tuple(samples), split)).to_dict()
    return {
        "command": "stats",
        "total": len(scan.entries),
        "skipped_files": scan.skipped,
        "splits": splits,
    }
