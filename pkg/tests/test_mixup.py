"""Morphological and blend mixing: examples, lattice laws, sample contracts."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rpmaug.domain import Panel, Provenance, RpmSample, validate_sample
from rpmaug.errors import InvalidSampleError
from rpmaug.mixup import (
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
from rpmaug.sampling import substream

from conftest import make_sample, random_panel


def panel(rows) -> Panel:
    return Panel.from_array(np.array(rows, dtype=np.uint8))


def pair_strategy(max_side=10):
    """Two equally sized random panels."""

    @st.composite
    def build(draw):
        w = draw(st.integers(1, max_side))
        h = draw(st.integers(1, max_side))
        def one():
            pix = draw(st.lists(st.integers(0, 255), min_size=w * h, max_size=w * h))
            return Panel(w, h, bytes(pix))
        return one(), one()

    return build()


def triple_strategy(max_side=8):
    @st.composite
    def build(draw):
        w = draw(st.integers(1, max_side))
        h = draw(st.integers(1, max_side))
        def one():
            pix = draw(st.lists(st.integers(0, 255), min_size=w * h, max_size=w * h))
            return Panel(w, h, bytes(pix))
        return one(), one(), one()

    return build()


def invert(p: Panel) -> Panel:
    return Panel.from_array((255 - p.to_array()).astype(np.uint8))


class TestGrayOps:
    def test_or_is_pixelwise_minimum(self):
        assert gray_or(panel([[10, 200]]), panel([[50, 100]])) == panel([[10, 100]])

    def test_and_is_pixelwise_maximum(self):
        assert gray_and(panel([[10, 200]]), panel([[50, 100]])) == panel([[50, 200]])

    def test_or_idempotent(self):
        p = random_panel(np.random.default_rng(0), 6, 4)
        assert gray_or(p, p).pixels == p.pixels

    def test_or_identity_is_white(self):
        p = random_panel(np.random.default_rng(1), 5, 5)
        white = panel(np.full((5, 5), 255))
        assert gray_or(p, white).pixels == p.pixels

    def test_and_identity_is_black(self):
        p = random_panel(np.random.default_rng(2), 5, 5)
        black = panel(np.zeros((5, 5)))
        assert gray_and(p, black).pixels == p.pixels

    def test_and_matches_nested_loop_oracle(self):
        rng = np.random.default_rng(3)
        a, b = random_panel(rng, 9, 7), random_panel(rng, 9, 7)
        aa, ba = a.to_array(), b.to_array()
        expected = [
            [max(int(aa[i, j]), int(ba[i, j])) for j in range(9)] for i in range(7)
        ]
        assert np.array_equal(gray_and(a, b).to_array(), np.array(expected))

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            gray_or(panel([[1, 2]]), panel([[1], [2]]))
        with pytest.raises(ValueError):
            gray_and(panel([[1, 2]]), panel([[1], [2]]))

    @settings(max_examples=80, deadline=None)
    @given(pair_strategy())
    def test_commutativity(self, pair):
        a, b = pair
        assert gray_or(a, b) == gray_or(b, a)
        assert gray_and(a, b) == gray_and(b, a)

    @settings(max_examples=60, deadline=None)
    @given(triple_strategy())
    def test_associativity_and_absorption(self, triple):
        a, b, c = triple
        assert gray_or(gray_or(a, b), c) == gray_or(a, gray_or(b, c))
        assert gray_and(gray_and(a, b), c) == gray_and(a, gray_and(b, c))
        assert gray_and(a, gray_or(a, b)) == a
        assert gray_or(a, gray_and(a, b)) == a

    @settings(max_examples=80, deadline=None)
    @given(pair_strategy())
    def test_monotone_bounds(self, pair):
        a, b = pair
        assert (gray_or(a, b).to_array() <= a.to_array()).all()
        assert (gray_and(a, b).to_array() >= a.to_array()).all()

    @settings(max_examples=80, deadline=None)
    @given(pair_strategy())
    def test_duality_under_inversion(self, pair):
        a, b = pair
        assert gray_or(a, b) == invert(gray_and(invert(a), invert(b)))

    @settings(max_examples=80, deadline=None)
    @given(pair_strategy())
    def test_value_set_closure(self, pair):
        a, b = pair
        aa, ba = a.to_array(), b.to_array()
        for out in (gray_or(a, b).to_array(), gray_and(a, b).to_array()):
            # every output pixel equals one of the two input pixels
            assert ((out == aa) | (out == ba)).all()
            assert set(out.ravel().tolist()) <= set(aa.ravel().tolist()) | set(
                ba.ravel().tolist()
            )

    def test_small_panel_exhaustive_equivalence(self):
        # full enumeration: all 81 x 81 pairs of 2x2 panels over {0, 128, 255}
        values = (0, 128, 255)
        panels = [
            panel([[a, b], [c, d]])
            for a in values
            for b in values
            for c in values
            for d in values
        ]
        for p1 in panels:
            a1 = p1.to_array()
            for p2 in panels:
                a2 = p2.to_array()
                expected_min = [
                    [min(int(a1[i, j]), int(a2[i, j])) for j in range(2)]
                    for i in range(2)
                ]
                expected_max = [
                    [max(int(a1[i, j]), int(a2[i, j])) for j in range(2)]
                    for i in range(2)
                ]
                assert gray_or(p1, p2).to_array().tolist() == expected_min
                assert gray_and(p1, p2).to_array().tolist() == expected_max


class TestVanillaBlend:
    def test_lambda_one_copies_first(self):
        rng = np.random.default_rng(4)
        a, b = random_panel(rng, 6, 6), random_panel(rng, 6, 6)
        assert vanilla_blend(a, b, 1.0).pixels == a.pixels

    def test_lambda_zero_copies_second(self):
        rng = np.random.default_rng(5)
        a, b = random_panel(rng, 6, 6), random_panel(rng, 6, 6)
        assert vanilla_blend(a, b, 0.0).pixels == b.pixels

    def test_midpoint_rounds_half_away_from_zero(self):
        assert vanilla_blend(panel([[0]]), panel([[255]]), 0.5) == panel([[128]])

    def test_blend_matches_double_precision_oracle(self):
        a = panel(np.zeros((3, 3)))
        b = panel(np.full((3, 3), 255))
        out = vanilla_blend(a, b, 0.3)
        import math

        expected = int(math.floor(0.3 * 0.0 + (1.0 - 0.3) * 255.0 + 0.5))
        assert expected == 179
        assert set(np.unique(out.to_array())) == {179}

    def test_lambda_out_of_range_rejected(self):
        a = panel([[0]])
        with pytest.raises(ValueError):
            vanilla_blend(a, a, -0.1)
        with pytest.raises(ValueError):
            vanilla_blend(a, a, 1.1)

    @settings(max_examples=60, deadline=None)
    @given(pair_strategy(max_side=6), st.floats(0.0, 1.0))
    def test_blend_oracle_random(self, pair, lam):
        import math

        a, b = pair
        out = vanilla_blend(a, b, lam).to_array()
        aa, ba = a.to_array(), b.to_array()
        for i in range(a.height):
            for j in range(a.width):
                v = lam * float(aa[i, j]) + (1.0 - lam) * float(ba[i, j])
                assert out[i, j] == min(max(math.floor(v + 0.5), 0), 255)

    def test_blend_can_leave_the_input_value_set(self):
        # the linear interpolation produces brand-new intensities
        a = panel(np.zeros((2, 2)))
        b = panel(np.full((2, 2), 255))
        out = vanilla_blend(a, b, 0.3).to_array()
        assert not set(out.ravel().tolist()) <= {0, 255}


class TestRecipeTypes:
    def test_recipe_requires_positive_alpha(self):
        with pytest.raises(ValueError):
            MixRecipe(MixKind.VANILLA, alpha=0.0)

    def test_mixed_candidate_label_bounds(self):
        p = panel([[1]])
        MixedCandidate(p, 0.5)
        with pytest.raises(ValueError):
            MixedCandidate(p, 1.5)


class TestIsDegenerate:
    def test_identical_true(self):
        p = random_panel(np.random.default_rng(6), 4, 4)
        assert is_degenerate(p, Panel(p.width, p.height, p.pixels))

    def test_one_pixel_difference_false(self):
        p = random_panel(np.random.default_rng(7), 4, 4)
        arr = p.to_array().copy()
        arr[0, 0] ^= 0xFF
        assert not is_degenerate(Panel.from_array(arr), p)

    def test_mix_of_equal_panels_is_degenerate(self):
        p = random_panel(np.random.default_rng(8), 4, 4)
        assert is_degenerate(gray_or(p, p), p)


class TestCamMixSample:
    def test_contract_against_oracle(self):
        s = make_sample(np.random.default_rng(9), target=3)
        for kind, prov in ((MixKind.OR, Provenance.CAM_OR), (MixKind.AND, Provenance.CAM_AND)):
            out = cam_mix_sample(s, kind)
            assert out.target == 3
            assert out.provenance is prov
            assert [p.pixels for p in out.context] == [p.pixels for p in s.context]
            assert out.candidates[3].pixels == s.candidates[3].pixels
            correct = s.candidates[3].to_array()
            for i in range(8):
                if i == 3:
                    continue
                reducer = np.minimum if kind is MixKind.OR else np.maximum
                expected = reducer(s.candidates[i].to_array(), correct)
                assert np.array_equal(out.candidates[i].to_array(), expected)
            assert validate_sample(out) == []

    def test_collision_keep_original_restores_input(self):
        s = make_sample(np.random.default_rng(10), target=0)
        cands = list(s.candidates)
        # a white negative ORs onto the correct answer exactly
        cands[4] = Panel.from_array(np.full((8, 8), 255, dtype=np.uint8))
        s = RpmSample(s.context, tuple(cands), 0, s.config)
        out = cam_mix_sample(s, MixKind.OR, CollisionPolicy.KEEP_ORIGINAL)
        assert out.candidates[4].pixels == cands[4].pixels
        assert out.degenerate_negatives == ()
        assert validate_sample(out) == []

    def test_collision_keep_mixed_flags_duplicate(self):
        s = make_sample(np.random.default_rng(11), target=0)
        cands = list(s.candidates)
        cands[4] = Panel.from_array(np.full((8, 8), 255, dtype=np.uint8))
        s = RpmSample(s.context, tuple(cands), 0, s.config)
        # an all-white negative ORs exactly onto the correct answer
        out = cam_mix_sample(s, MixKind.OR, CollisionPolicy.KEEP_MIXED)
        assert 4 in out.degenerate_negatives
        assert out.candidates[4].pixels == s.candidates[0].pixels
        assert "DUPLICATE_CORRECT" in {v.code for v in validate_sample(out)}

    def test_invalid_input_rejected_with_report(self):
        s = make_sample(np.random.default_rng(12))
        broken = RpmSample(s.context[:5], s.candidates, s.target, s.config)
        with pytest.raises(InvalidSampleError) as exc:
            cam_mix_sample(broken, MixKind.OR)
        assert any(v.code == "CONTEXT_COUNT" for v in exc.value.report)

    def test_vanilla_kind_rejected(self):
        s = make_sample(np.random.default_rng(13))
        with pytest.raises(ValueError):
            cam_mix_sample(s, MixKind.VANILLA)


class TestVanillaMixSample:
    def test_forced_zero_lambda_is_identity(self):
        s = make_sample(np.random.default_rng(14), target=2)
        out, labels = vanilla_mix_sample(s, 1.0, substream(0, 0), lambda_values=[0.0] * 7)
        assert [p.pixels for p in out.candidates] == [p.pixels for p in s.candidates]
        assert labels[2] == 1.0
        assert all(labels[i] == 0.0 for i in range(8) if i != 2)
        assert out.provenance is Provenance.VANILLA

    def test_forced_one_lambda_duplicates_correct(self):
        s = make_sample(np.random.default_rng(15), target=2)
        out, labels = vanilla_mix_sample(s, 1.0, substream(0, 0), lambda_values=[1.0] * 7)
        for i in range(8):
            assert out.candidates[i].pixels == s.candidates[2].pixels
            assert labels[i] == 1.0
        assert "DUPLICATE_CORRECT" in {v.code for v in validate_sample(out)}

    def test_blend_order_and_soft_labels(self):
        s = make_sample(np.random.default_rng(16), target=1)
        rng = substream(5, 0)
        out, labels = vanilla_mix_sample(s, 1.0, rng)
        # replay the draws to confirm blend(correct, negative, lambda) order
        replay = substream(5, 0)
        from rpmaug.sampling import sample_lambda

        correct = s.candidates[1]
        for i in range(8):
            if i == 1:
                assert labels[i] == 1.0
                assert out.candidates[i].pixels == correct.pixels
                continue
            lam = sample_lambda(1.0, replay)
            assert labels[i] == lam
            assert (
                out.candidates[i].pixels
                == vanilla_blend(correct, s.candidates[i], lam).pixels
            )

    def test_invalid_sample_rejected(self):
        s = make_sample(np.random.default_rng(17))
        broken = RpmSample(s.context, s.candidates[:7], s.target, s.config)
        with pytest.raises(InvalidSampleError):
            vanilla_mix_sample(broken, 1.0, substream(0, 0))
