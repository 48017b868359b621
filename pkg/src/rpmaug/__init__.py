"""rpmaug: augmentation toolkit for RPM-style visual-reasoning datasets.

Provides morphological and alpha-blend candidate mixup, a self-contained
mini puzzle generator, bit-exact dataset archive I/O, and analysis tools
(closure checking, statistics, 2-D principal projection), plus a batch
CLI (``rpmaug``).
"""

from .analysis import ClosureReport, DatasetStats, check_closure, dataset_stats
from .archive import (
    ArrayHeader,
    DatasetEntry,
    ScanResult,
    decode_array,
    encode_array,
    read_array,
    read_sample_archive,
    scan_dataset,
    write_array,
    write_sample_archive,
)
from .domain import (
    Dataset,
    Panel,
    Provenance,
    PuzzleConfiguration,
    RpmSample,
    Split,
    Violation,
    resize_panel,
    validate_sample,
)
from .mixup import (
    CollisionPolicy,
    MixKind,
    MixRecipe,
    MixedCandidate,
    cam_mix_sample,
    gray_and,
    gray_or,
    is_degenerate,
    vanilla_blend,
    vanilla_mix_sample,
)
from .pca import (
    ProjectionModel,
    export_scatter,
    jacobi_eigh,
    load_feature_file,
    pca_fit,
    pca_project,
)
from .puzzle import (
    AttributeVector,
    NegativeStyle,
    gen_negatives_iraven,
    gen_negatives_raven,
    generate_sample,
    render_panel,
)
from .sampling import sample_lambda, substream

__version__ = "0.1.0"

__all__ = [
    "ArrayHeader",
    "AttributeVector",
    "ClosureReport",
    "CollisionPolicy",
    "Dataset",
    "DatasetEntry",
    "DatasetStats",
    "MixKind",
    "MixRecipe",
    "MixedCandidate",
    "NegativeStyle",
    "Panel",
    "ProjectionModel",
    "Provenance",
    "PuzzleConfiguration",
    "RpmSample",
    "ScanResult",
    "Split",
    "Violation",
    "cam_mix_sample",
    "check_closure",
    "dataset_stats",
    "decode_array",
    "encode_array",
    "export_scatter",
    "gen_negatives_iraven",
    "gen_negatives_raven",
    "generate_sample",
    "gray_and",
    "gray_or",
    "is_degenerate",
    "jacobi_eigh",
    "load_feature_file",
    "pca_fit",
    "pca_project",
    "read_array",
    "read_sample_archive",
    "render_panel",
    "resize_panel",
    "sample_lambda",
    "scan_dataset",
    "substream",
    "validate_sample",
    "vanilla_blend",
    "vanilla_mix_sample",
    "write_array",
    "write_sample_archive",
]
