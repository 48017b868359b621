"""Batch command-line front-end.

Subcommands: generate, augment, validate, stats, project, resize. Exit
codes partition outcomes: 0 success, 1 domain failure (validation or
closure violations), 2 usage error, 3 I/O or format error. All runs are
deterministic under fixed flags; no environment variables are consulted.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass

from . import pipeline
from .domain import PuzzleConfiguration, Split
from .errors import ArchiveError, RpmaugError
from .mixup import CollisionPolicy, MixKind, MixRecipe
from .pca import export_scatter, load_feature_file, pca_fit, pca_project, standardize_columns
from .puzzle import NegativeStyle

_CONFIG_FLAGS = {
    "center": PuzzleConfiguration.CENTER,
    "grid2": PuzzleConfiguration.GRID2X2,
    "grid3": PuzzleConfiguration.GRID3X3,
    "left-right": PuzzleConfiguration.LEFT_RIGHT,
    "up-down": PuzzleConfiguration.UP_DOWN,
    "out-in-center": PuzzleConfiguration.OUT_IN_CENTER,
    "out-in-grid": PuzzleConfiguration.OUT_IN_GRID,
}

_OP_FLAGS = {"or": MixKind.OR, "and": MixKind.AND, "vanilla": MixKind.VANILLA}
_COLLISION_FLAGS = {
    "keep-original": CollisionPolicy.KEEP_ORIGINAL,
    "keep-mixed": CollisionPolicy.KEEP_MIXED,
}


def _parse_size(text: str) -> tuple[int, int]:
    if re.fullmatch(r"\d+", text):
        side = int(text)
        size = (side, side)
    else:
        m = re.fullmatch(r"(\d+)x(\d+)", text)
        if m is None:
            raise argparse.ArgumentTypeError(
                f"size must be N or WxH (e.g. 80 or 160x160), got {text!r}"
            )
        size = (int(m.group(1)), int(m.group(2)))
    if size[0] <= 0 or size[1] <= 0:
        raise argparse.ArgumentTypeError(f"size dimensions must be positive, got {text!r}")
    return size


def _parse_splits(text: str) -> set[Split]:
    out = set()
    for part in text.split(","):
        part = part.strip()
        try:
            out.add(Split(part))
        except ValueError:
            raise argparse.ArgumentTypeError(
                f"unknown split {part!r}; use a comma list of train,val,test"
            ) from None
    if not out:
        raise argparse.ArgumentTypeError("at least one split is required")
    return out


@dataclass(frozen=True)
class Invocation:
    """A fully parsed command: subcommand tag plus resolved flag set."""

    subcommand: str
    options: argparse.Namespace


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rpmaug",
        description="Augment, generate, validate and analyze RPM-style datasets.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("generate", help="write a freshly generated mini dataset")
    p.add_argument("--config", required=True, choices=sorted(_CONFIG_FLAGS) + ["all"])
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--style", choices=["raven", "iraven"], default="raven")
    p.add_argument("--size", type=_parse_size, default=(160, 160))
    p.add_argument("--split", choices=[s.value for s in Split], default="train")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("augment", help="add mixed candidate sets to a dataset")
    p.add_argument("--in", dest="in_dir", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--op", required=True, choices=sorted(_OP_FLAGS))
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--collision", choices=sorted(_COLLISION_FLAGS), default="keep-original")
    p.add_argument("--splits", type=_parse_splits, default={Split.TRAIN})
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--force-splits", action="store_true")
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("validate", help="check sample invariants and closure")
    p.add_argument("--in", dest="in_dir", required=True)
    p.add_argument("--against")
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("stats", help="per-split dataset statistics")
    p.add_argument("--in", dest="in_dir", required=True)
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("project", help="2-D principal projection of feature vectors")
    p.add_argument("--features", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--standardize", action="store_true")
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("resize", help="re-write archives at a new panel size")
    p.add_argument("--in", dest="in_dir", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--size", type=_parse_size, required=True)
    p.add_argument("--format", choices=["text", "json"], default="text")
    return parser


def parse_invocation(argv: list[str]) -> Invocation:
    """Strict parse of an argument vector (unknown flags are rejected)."""
    parser = build_parser()
    options = parser.parse_args(argv)
    if options.subcommand == "augment":
        forbidden = {s for s in options.splits if s is not Split.TRAIN}
        if forbidden and not options.force_splits:
            parser.error(
                f"refusing to augment evaluation splits "
                f"{sorted(s.value for s in forbidden)}; pass --force-splits to override"
            )
        if options.jobs < 1:
            parser.error("--jobs must be at least 1")
    return Invocation(options.subcommand, options)


def execute(inv: Invocation) -> tuple[int, dict]:
    """Run one parsed invocation; return (exit code, summary)."""
    opt = inv.options
    if inv.subcommand == "generate":
        if opt.config == "all":
            configs = [_CONFIG_FLAGS[k] for k in (
                "center", "grid2", "grid3", "left-right", "up-down",
                "out-in-center", "out-in-grid",
            )]
        else:
            configs = [_CONFIG_FLAGS[opt.config]]
        summary = pipeline.generate_dataset(
            opt.out,
            configs,
            opt.count,
            opt.seed,
            NegativeStyle(opt.style),
            opt.size,
            Split(opt.split),
        )
        return 0, summary

    if inv.subcommand == "augment":
        recipe = MixRecipe(
            kind=_OP_FLAGS[opt.op],
            alpha=opt.alpha,
            collision_policy=_COLLISION_FLAGS[opt.collision],
            seed=opt.seed,
        )
        summary = pipeline.augment_dataset(
            opt.in_dir,
            opt.out,
            recipe,
            splits=set(opt.splits),
            jobs=opt.jobs,
            force_splits=opt.force_splits,
        )
        return 0, summary

    if inv.subcommand == "validate":
        summary = pipeline.validate_directory(opt.in_dir, opt.against)
        return (0 if summary["ok"] else 1), summary

    if inv.subcommand == "stats":
        return 0, pipeline.stats_directory(opt.in_dir)

    if inv.subcommand == "project":
        try:
            features, labels = load_feature_file(opt.features)
        except ValueError as exc:
            raise ArchiveError(f"bad feature file: {exc}") from exc
        if labels is None:
            raise ArchiveError(
                "feature file lacks the trailing label column "
                "(correct / negative_original / negative_synthetic)"
            )
        if opt.standardize:
            features = standardize_columns(features)
        model = pca_fit(features, dims=2)
        projected = pca_project(model, features)
        export_scatter(projected, labels, opt.out)
        summary = {
            "command": "project",
            "points": int(projected.shape[0]),
            "standardized": bool(opt.standardize),
            "explained_variance": [float(v) for v in model.explained_variance],
            "out": str(opt.out),
        }
        return 0, summary

    if inv.subcommand == "resize":
        return 0, pipeline.resize_dataset(opt.in_dir, opt.out, opt.size)

    raise AssertionError(f"unreachable subcommand {inv.subcommand}")


def _print_text(value, indent: int = 0, key: str | None = None) -> None:
    pad = "  " * indent
    label = f"{key}: " if key is not None else ""
    if isinstance(value, dict):
        if key is not None:
            print(f"{pad}{key}:")
        for k, v in value.items():
            _print_text(v, indent + (key is not None), k)
    elif isinstance(value, list) and any(isinstance(v, (dict, list)) for v in value):
        print(f"{pad}{key}:")
        for v in value:
            _print_text(v, indent + 1)
    else:
        if isinstance(value, list):
            value = ", ".join(str(v) for v in value)
        print(f"{pad}{label}{value}")


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    inv = parse_invocation(argv)  # SystemExit(2) on usage errors
    try:
        code, summary = execute(inv)
    except (ArchiveError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (RpmaugError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    if inv.options.format == "json":
        print(json.dumps(summary, indent=2))
    else:
        _print_text(summary)
    return code


if __name__ == "__main__":
    sys.exit(main())
