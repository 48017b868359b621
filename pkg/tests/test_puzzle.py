"""Puzzle generator: rules, negatives, rendering, whole-sample assembly."""

import numpy as np
import pytest

from rpmaug.domain import PuzzleConfiguration, validate_sample
from rpmaug.errors import DomainOverflowError, GenerationExhaustedError
from rpmaug.puzzle import (
    FILL_PALETTE,
    AttributeVector,
    NegativeStyle,
    Rule,
    RuleKind,
    apply_rule,
    config_layout,
    coordinates,
    gen_negatives_iraven,
    gen_negatives_raven,
    generate_sample,
    hamming_distance,
    mask_popcount,
    render_panel,
    rule_satisfied,
    sample_rule_set,
)
from rpmaug.puzzle.attributes import symbol_from_dict
from rpmaug.sampling import substream

ALLOWED_VALUES = {0, 255} | set(FILL_PALETTE)


class TestAttributeVector:
    def test_mask_count_consistency_enforced(self):
        AttributeVector(0, 0, 0, number_idx=1, position_mask=0b0101)
        with pytest.raises(ValueError):
            AttributeVector(0, 0, 0, number_idx=2, position_mask=0b0101)
        with pytest.raises(ValueError):
            AttributeVector(0, 0, 0, number_idx=0, position_mask=None)

    def test_index_bounds(self):
        with pytest.raises(ValueError):
            AttributeVector(5, 0, 0)
        with pytest.raises(ValueError):
            AttributeVector(0, 0, 6)


class TestRules:
    def test_constant_completion(self):
        rule = Rule(RuleKind.CONSTANT, lo=0, hi=4)
        assert apply_rule(rule, (2, None, None)) == (2, 2, 2)

    def test_progressive_completion(self):
        rule = Rule(RuleKind.PROGRESSIVE, lo=0, hi=4, step=1)
        assert apply_rule(rule, (1, None, None)) == (1, 2, 3)

    def test_arithmetic_plus_on_counts(self):
        rule = Rule(RuleKind.ARITHMETIC, lo=1, hi=9, sign=1)
        assert apply_rule(rule, (2, 3, None)) == (2, 3, 5)

    def test_arithmetic_minus(self):
        rule = Rule(RuleKind.ARITHMETIC, lo=0, hi=5, sign=-1)
        assert apply_rule(rule, (4, 3, None)) == (4, 3, 1)

    def test_domain_overflow_raised(self):
        rule = Rule(RuleKind.PROGRESSIVE, lo=0, hi=4, step=2)
        with pytest.raises(DomainOverflowError):
            apply_rule(rule, (3, None, None))
        arule = Rule(RuleKind.ARITHMETIC, lo=1, hi=4, sign=1)
        with pytest.raises(DomainOverflowError):
            apply_rule(arule, (3, 3, None))

    def test_distribute_three_rotations(self):
        rule = Rule(RuleKind.DISTRIBUTE_THREE, lo=0, hi=4, triple=(1, 3, 0))
        assert apply_rule(rule, (3, None, None)) == (3, 0, 1)
        assert apply_rule(rule, (1, None, None)) == (1, 3, 0)
        with pytest.raises(DomainOverflowError):
            apply_rule(rule, (2, None, None))

    def test_rule_satisfied_matches_apply(self):
        rules = [
            Rule(RuleKind.CONSTANT, 0, 4),
            Rule(RuleKind.PROGRESSIVE, 0, 4, step=-1),
            Rule(RuleKind.ARITHMETIC, 0, 5, sign=1),
            Rule(RuleKind.DISTRIBUTE_THREE, 0, 4, triple=(0, 2, 4)),
        ]
        rows = [(3, None, None), (4, None, None), (1, 2, None), (4, None, None)]
        for rule, row in zip(rules, rows):
            completed = apply_rule(rule, row)
            assert rule_satisfied(rule, completed)
        assert not rule_satisfied(rules[0], (1, 1, 2))
        assert not rule_satisfied(rules[3], (0, 4, 2))  # anti-cyclic order


class TestRuleSampling:
    def test_center_governs_type_size_color_only(self):
        spec = sample_rule_set(PuzzleConfiguration.CENTER, substream(0, 0))
        assert [c for c, _ in spec.rules] == [(0, "type"), (0, "size"), (0, "color")]

    def test_grid_adds_layout_rule(self):
        spec = sample_rule_set(PuzzleConfiguration.GRID2X2, substream(0, 0))
        assert (0, "layout") in [c for c, _ in spec.rules]

    def test_two_component_configs_govern_both(self):
        spec = sample_rule_set(PuzzleConfiguration.OUT_IN_GRID, substream(0, 1))
        coords = [c for c, _ in spec.rules]
        assert (0, "type") in coords and (1, "layout") in coords
        assert (0, "color") not in coords  # outer ring is outline-only

    def test_deterministic_under_seed(self):
        a = sample_rule_set(PuzzleConfiguration.GRID3X3, substream(7, 3))
        b = sample_rule_set(PuzzleConfiguration.GRID3X3, substream(7, 3))
        assert a == b


def _plane_rows(annotation: dict, rule: dict):
    """Extract the 3 value rows a rule governs from grid annotations."""
    ci = rule["component"]
    attr = rule["attribute"]
    grid = annotation["grid"]
    rows = []
    for r in range(3):
        row = []
        for c in range(3):
            cell = grid[r][c][ci]
            if attr == "layout":
                mask = 0
                for pos in cell["positions"]:
                    mask |= 1 << pos
                if rule["kind"] in ("constant", "distribute_three"):
                    row.append(mask)
                else:
                    row.append(mask_popcount(mask))
            else:
                row.append(cell[attr])
        rows.append(tuple(row))
    return rows


class TestGridFilling:
    @pytest.mark.parametrize("config", list(PuzzleConfiguration))
    def test_every_row_satisfies_every_rule(self, config):
        for ordinal in range(6):
            _, ann = generate_sample(
                config, NegativeStyle.RAVEN, 48, 48, substream(21, ordinal)
            )
            for rule_dict in ann["rules"]:
                rule = Rule(
                    RuleKind(rule_dict["kind"]),
                    rule_dict["lo"],
                    rule_dict["hi"],
                    step=rule_dict.get("step"),
                    sign=rule_dict.get("sign"),
                    triple=tuple(rule_dict["triple"]) if "triple" in rule_dict else None,
                )
                for row in _plane_rows(ann, rule_dict):
                    assert rule_satisfied(rule, row), (config, rule_dict, row)

    def test_distribute_three_rows_use_distinct_rotations(self):
        found = False
        for ordinal in range(30):
            _, ann = generate_sample(
                PuzzleConfiguration.CENTER, NegativeStyle.RAVEN, 48, 48, substream(5, ordinal)
            )
            for rule_dict in ann["rules"]:
                if rule_dict["kind"] != "distribute_three":
                    continue
                found = True
                rows = _plane_rows(ann, rule_dict)
                starts = [r[0] for r in rows]
                assert len(set(starts)) == 3  # distinct rotations across rows
        assert found


class TestNegativesRaven:
    @pytest.mark.parametrize(
        "config", [PuzzleConfiguration.CENTER, PuzzleConfiguration.GRID3X3,
                   PuzzleConfiguration.OUT_IN_GRID]
    )
    def test_all_negatives_at_distance_one(self, config):
        layout = config_layout(config)
        for ordinal in range(10):
            _, ann = generate_sample(config, NegativeStyle.RAVEN, 48, 48, substream(2, ordinal))
            correct = symbol_from_dict(ann["candidates"][ann["target"]])
            for i, cand in enumerate(ann["candidates"]):
                if i == ann["target"]:
                    continue
                assert hamming_distance(correct, symbol_from_dict(cand), layout) == 1

    def test_candidates_pairwise_distinct(self):
        layout = config_layout(PuzzleConfiguration.CENTER)
        correct = (AttributeVector(1, 2, 3),)
        negatives = gen_negatives_raven(correct, layout, substream(3, 0))
        everyone = [correct, *negatives]
        assert len(set(everyone)) == 8

    def test_deterministic(self):
        layout = config_layout(PuzzleConfiguration.GRID2X2)
        correct = (AttributeVector(1, 2, 3, number_idx=1, position_mask=0b0011),)
        a = gen_negatives_raven(correct, layout, substream(4, 9))
        b = gen_negatives_raven(correct, layout, substream(4, 9))
        assert a == b


class TestNegativesIraven:
    def test_distance_histogram_is_3_3_1(self):
        layout = config_layout(PuzzleConfiguration.OUT_IN_CENTER)
        correct = (AttributeVector(0, 0, 0), AttributeVector(2, 3, 4))
        for ordinal in range(10):
            negatives = gen_negatives_iraven(correct, layout, substream(6, ordinal))
            dists = sorted(hamming_distance(correct, n, layout) for n in negatives)
            assert dists == [1, 1, 1, 2, 2, 2, 3]

    def test_correct_leaf_excluded(self):
        layout = config_layout(PuzzleConfiguration.CENTER)
        correct = (AttributeVector(4, 4, 5),)
        negatives = gen_negatives_iraven(correct, layout, substream(7, 0))
        assert len(negatives) == 7
        assert correct not in negatives

    def test_too_few_attributes_exhausts(self):
        # an outline-only single component governs just type+size
        outer_only = (config_layout(PuzzleConfiguration.OUT_IN_CENTER)[0],)
        with pytest.raises(GenerationExhaustedError):
            gen_negatives_iraven((AttributeVector(0, 0, 0),), outer_only, substream(0, 0))


class TestRender:
    def test_value_set_within_palette(self, generated_samples):
        for (config, style), (sample, _) in generated_samples.items():
            for p in sample.context + sample.candidates:
                assert set(np.unique(p.to_array()).tolist()) <= ALLOWED_VALUES

    def test_deterministic(self):
        sym = (AttributeVector(2, 3, 1),)
        a = render_panel(PuzzleConfiguration.CENTER, sym, 64, 64)
        b = render_panel(PuzzleConfiguration.CENTER, sym, 64, 64)
        assert a.pixels == b.pixels

    def test_color_change_touches_only_fill_pixels(self):
        base = (AttributeVector(1, 4, 0),)
        other = (AttributeVector(1, 4, 3),)
        a = render_panel(PuzzleConfiguration.CENTER, base, 160, 160).to_array()
        b = render_panel(PuzzleConfiguration.CENTER, other, 160, 160).to_array()
        diff = a != b
        assert diff.any()
        assert set(a[diff].tolist()) == {FILL_PALETTE[0]}
        assert set(b[diff].tolist()) == {FILL_PALETTE[3]}
        # outline and background pixels are untouched
        assert np.array_equal(a == 0, b == 0)
        assert np.array_equal(a == 255, b == 255)

    def test_every_shape_renders_fill_and_outline(self):
        for type_idx in range(5):
            sym = (AttributeVector(type_idx, 2, 2),)
            arr = render_panel(PuzzleConfiguration.CENTER, sym, 96, 96).to_array()
            values = set(np.unique(arr).tolist())
            assert 0 in values and 255 in values and FILL_PALETTE[2] in values

    def test_grid_masks_place_shapes(self):
        sym = (AttributeVector(1, 2, 2, number_idx=1, position_mask=0b1001),)
        arr = render_panel(PuzzleConfiguration.GRID2X2, sym, 96, 96).to_array()
        # occupied: cells 0 (top-left) and 3 (bottom-right)
        assert (arr[:48, :48] < 255).any()
        assert (arr[48:, 48:] < 255).any()
        assert (arr[:48, 48:] == 255).all()
        assert (arr[48:, :48] == 255).all()


class TestGenerateSample:
    def test_outputs_validate_clean(self, generated_samples):
        for (config, style), (sample, _) in generated_samples.items():
            assert validate_sample(sample) == [], (config, style)

    def test_correct_candidate_matches_symbol_render(self, generated_samples):
        for (config, style), (sample, ann) in generated_samples.items():
            correct_sym = symbol_from_dict(ann["candidates"][ann["target"]])
            rendered = render_panel(config, correct_sym, 80, 80)
            assert sample.candidates[sample.target].pixels == rendered.pixels

    def test_deterministic_given_stream(self):
        a, ann_a = generate_sample(
            PuzzleConfiguration.GRID2X2, NegativeStyle.IRAVEN, 64, 64, substream(9, 2)
        )
        b, ann_b = generate_sample(
            PuzzleConfiguration.GRID2X2, NegativeStyle.IRAVEN, 64, 64, substream(9, 2)
        )
        assert a == b and ann_a == ann_b

    def test_target_positions_unbiased(self):
        # the placement rule in isolation: position of item 0 under the
        # generator's shuffling permutation
        counts = np.zeros(8)
        n = 10_000
        for i in range(n):
            positions = substream(13, i).permutation(8)
            counts[int(positions[0])] += 1
        freqs = counts / n
        assert np.all(np.abs(freqs - 1 / 8) < 0.02)
