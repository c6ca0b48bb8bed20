import random

import pytest

from docgen import random_document, separated_grid, shuffle_tokens
from xyorder.augment import (
    AugmentParams,
    augmented_xy_cut,
    sample_shifts,
    shift_boxes,
)
from xyorder.geometry import Document, TokenBox
from xyorder.xycut import xy_cut


class ScriptedRandom:
    """Stands in for random.Random with a fixed draw script."""

    def __init__(self, values):
        self.values = list(values)

    def uniform(self, lo, hi):
        assert (lo, hi) == (-1.0, 1.0)
        return self.values.pop(0)

    def gauss(self, mu, sigma):
        return self.values.pop(0)


def one_box_doc():
    return Document("one", 100, 100, (TokenBox(10, 10, 20, 20, "t", 0),))


class TestShiftBoxes:
    def test_shift_fires_above_threshold(self):
        params = AugmentParams(lambda_x=0.5, lambda_y=0.5, theta=5.0)
        rng = ScriptedRandom([0.8, 0.0])  # v_x=0.8 shifts, v_y=0.0 does not
        out = shift_boxes(one_box_doc(), params, rng)
        tok = out.tokens[0]
        assert (tok.x1, tok.x2) == (14.0, 24.0)  # +5 * 0.8
        assert (tok.y1, tok.y2) == (10.0, 20.0)

    def test_no_shift_at_or_below_threshold(self):
        params = AugmentParams(lambda_x=0.5, lambda_y=0.5, theta=5.0)
        rng = ScriptedRandom([0.3, -0.5])  # |v| <= lambda on both axes
        assert shift_boxes(one_box_doc(), params, rng) == one_box_doc()

    def test_negative_v_shifts_left(self):
        params = AugmentParams(theta=10.0)
        rng = ScriptedRandom([-0.9, 0.0])
        tok = shift_boxes(one_box_doc(), params, rng).tokens[0]
        assert (tok.x1, tok.x2) == (1.0, 11.0)

    def test_theta_zero_is_identity_for_any_seed(self):
        rng = random.Random(51)
        doc = random_document(rng, k=40)
        for seed in range(20):
            out = shift_boxes(doc, AugmentParams(theta=0.0, seed=seed))
            assert out == doc

    def test_thresholds_at_one_disable_shifting(self):
        rng = random.Random(52)
        doc = random_document(rng, k=40)
        for seed in range(20):
            out = shift_boxes(doc, AugmentParams(lambda_x=1.0, lambda_y=1.0, seed=seed))
            assert out == doc

    def test_deterministic_given_seed(self):
        rng = random.Random(53)
        doc = random_document(rng, k=60)
        params = AugmentParams(seed=99)
        assert shift_boxes(doc, params) == shift_boxes(doc, params)

    def test_size_never_changes_and_shift_bounded_by_theta(self):
        rng = random.Random(54)
        for seed in range(30):
            doc = random_document(rng, k=rng.randint(1, 50))
            theta = rng.choice([0.0, 1.0, 5.0, 10.0])
            out = shift_boxes(doc, AugmentParams(theta=theta, seed=seed))
            eps = 1e-9  # addition rounding wobble on the shifted edges
            for before, after in zip(doc.tokens, out.tokens):
                assert after.x2 - after.x1 == pytest.approx(before.x2 - before.x1, abs=eps)
                assert after.y2 - after.y1 == pytest.approx(before.y2 - before.y1, abs=eps)
                assert abs(after.x1 - before.x1) <= theta + eps
                assert abs(after.y1 - before.y1) <= theta + eps

    def test_appending_tokens_keeps_earlier_draws(self):
        rng = random.Random(55)
        doc = random_document(rng, k=20)
        extended = Document(
            doc.id, doc.width, doc.height,
            doc.tokens + (TokenBox(1, 1, 2, 2, "extra", 20),),
        )
        params = AugmentParams(seed=7)
        small = shift_boxes(doc, params)
        large = shift_boxes(extended, params)
        assert large.tokens[:20] == small.tokens

    def test_draws_follow_source_index_not_sequence_order(self):
        rng = random.Random(56)
        doc = random_document(rng, k=30)
        params = AugmentParams(seed=13)
        base = shift_boxes(doc, params)
        shuffled = shift_boxes(shuffle_tokens(doc, rng), params)
        by_source = {t.source_index: t for t in shuffled.tokens}
        assert all(by_source[t.source_index] == t for t in base.tokens)

    def test_clipped_normal_draws_stay_bounded(self):
        params = AugmentParams(seed=3, distribution="clipped-normal")
        samples = sample_shifts(500, params)
        assert all(abs(s.v_x) <= 1.0 and abs(s.v_y) <= 1.0 for s in samples)

    def test_uniform_draws_stay_bounded(self):
        samples = sample_shifts(500, AugmentParams(seed=4))
        assert all(abs(s.v_x) <= 1.0 and abs(s.v_y) <= 1.0 for s in samples)

    def test_param_validation(self):
        with pytest.raises(ValueError):
            AugmentParams(lambda_x=1.5)
        with pytest.raises(ValueError):
            AugmentParams(theta=-1.0)
        with pytest.raises(ValueError):
            AugmentParams(seed=2**64)
        with pytest.raises(ValueError):
            AugmentParams(distribution="gaussian")


class TestAugmentedCut:
    def test_equals_cut_of_shifted_document(self):
        rng = random.Random(61)
        for seed in range(20):
            doc = random_document(rng, k=rng.randint(1, 40))
            params = AugmentParams(seed=seed)
            order, tree = augmented_xy_cut(doc, params)
            expected_order, expected_tree = xy_cut(shift_boxes(doc, params))
            assert order == expected_order
            assert tree == expected_tree

    def test_theta_zero_equals_plain_cut(self):
        rng = random.Random(62)
        for seed in range(30):
            doc = random_document(rng, k=rng.randint(1, 40))
            aug = augmented_xy_cut(doc, AugmentParams(theta=0.0, seed=seed))
            assert aug == xy_cut(doc)

    def test_thresholds_at_one_equal_plain_cut(self):
        rng = random.Random(63)
        doc = random_document(rng, k=50)
        for seed in range(10):
            aug = augmented_xy_cut(doc, AugmentParams(lambda_x=1.0, lambda_y=1.0, seed=seed))
            assert aug == xy_cut(doc)

    def test_always_a_permutation(self):
        rng = random.Random(64)
        for trial in range(100):
            doc = random_document(rng, k=rng.randint(1, 64))
            params = AugmentParams(
                lambda_x=rng.random(), lambda_y=rng.random(),
                theta=rng.choice([0.0, 1.0, 5.0, 10.0]), seed=trial,
            )
            order, _ = augmented_xy_cut(doc, params)
            assert sorted(order) == list(range(len(doc.tokens)))

    def test_reproducible_for_fixed_inputs(self):
        rng = random.Random(65)
        doc = random_document(rng, k=100)
        params = AugmentParams(seed=2**40 + 17)
        assert augmented_xy_cut(doc, params)[0] == augmented_xy_cut(doc, params)[0]

    def test_well_separated_layout_is_stable_over_seeds(self):
        # every gap exceeds twice theta, so no shift can open or close a valley
        doc = separated_grid(rows=6, cols=5, gap=20.0, box=30.0)
        base, _ = xy_cut(doc)
        for seed in range(200):
            order, _ = augmented_xy_cut(doc, AugmentParams(theta=5.0, seed=seed))
            assert order == base
