"""Desk-scale generator of RPM samples with symbolic attribute structure."""

from .attributes import (
    FILL_PALETTE,
    SHAPE_NAMES,
    SIZE_SCALES,
    AttributeVector,
    ComponentSpec,
    ConfigLayout,
    config_layout,
    coordinates,
    coordinate_domain_size,
    get_coordinate,
    hamming_distance,
    mask_popcount,
    set_coordinate,
    symbol_to_dict,
)
from .generate import NegativeStyle, generate_sample
from .negatives import gen_negatives_iraven, gen_negatives_raven
from .render import render_panel
from .rules import (
    Rule,
    RuleKind,
    RuleSpec,
    apply_rule,
    rule_satisfied,
    sample_rule_set,
)

__all__ = [
    "AttributeVector",
    "ComponentSpec",
    "ConfigLayout",
    "FILL_PALETTE",
    "NegativeStyle",
    "Rule",
    "RuleKind",
    "RuleSpec",
    "SHAPE_NAMES",
    "SIZE_SCALES",
    "apply_rule",
    "config_layout",
    "coordinate_domain_size",
    "coordinates",
    "gen_negatives_iraven",
    "gen_negatives_raven",
    "generate_sample",
    "get_coordinate",
    "hamming_distance",
    "mask_popcount",
    "render_panel",
    "rule_satisfied",
    "sample_rule_set",
    "set_coordinate",
    "symbol_to_dict",
]
