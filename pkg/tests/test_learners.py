import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pater.exceptions import DimensionError, InvalidLabelError, NumericalFault
from pater.learners import (
    ClassAggregates,
    ClassWeights,
    LearnerState,
    OnlineLearner,
    Variant,
    aggregate_step,
    apply_update,
    hinge_loss_fn,
    hinge_loss_fp,
    hinge_loss_pa,
    online_step,
    pa_update,
    pater_tau,
    pater_update,
    perceptron_update,
    predict,
    run_stream,
    ter_loss,
)

from oracles import direct_class_means, nonrecursive_pater, random_stream, replay_k

TER = ["pater1", "pater2", "wpater1", "wpater2"]


def state_with(variant, w, class_weights=None):
    s = LearnerState.new(variant, len(w), class_weights)
    s.weights[:] = w
    return s


class TestPredict:
    @pytest.mark.parametrize("w, x, expected", [
        ((0, 0), (3, -1), 1),
        ((1, 0), (-2, 5), -1),
        ((0.5, -0.5), (1, 1), 1),
    ])
    def test_examples(self, w, x, expected):
        assert predict(np.array(w, float), np.array(x, float)) == expected

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            predict(np.zeros(2), np.zeros(3))


class TestLosses:
    def test_pa_hinge(self):
        assert hinge_loss_pa(np.array([1.0, 0]), np.array([2.0, 0]), 1) == 0.0
        assert hinge_loss_pa(np.zeros(2), np.array([5.0, 5]), -1) == 1.0
        assert hinge_loss_pa(np.array([1.0, 0]), np.array([0.5, 0]), 1) == 0.5

    def test_fp_fn(self):
        assert hinge_loss_fp(np.zeros(2), np.array([1.0, 1.0])) == 1.0
        assert hinge_loss_fn(np.array([2.0, 0]), np.array([1.0, 0])) == 0.0
        assert hinge_loss_fp(np.array([1.0, 0]), np.array([0.5, 0])) == 1.5

    def test_label_rejected(self):
        with pytest.raises(InvalidLabelError):
            hinge_loss_pa(np.zeros(2), np.ones(2), 0)

    def test_ter_empty(self):
        assert ter_loss(np.zeros(2), [], []) == 0.0

    def test_ter_zero_weights(self):
        X = np.array([[1.0, 0], [1.0, 0]])
        assert ter_loss(np.zeros(2), X, [-1, 1]) == 2.0

    def test_ter_brute_force(self):
        w = np.array([1.0, 0.0])
        X = np.array([[0.5, 1.0], [-3.0, 0.0], [0.2, 0.0]])
        y = np.array([-1, -1, 1])
        cw = ClassWeights(0.3, 2.0)
        fp = [hinge_loss_fp(w, X[0]), hinge_loss_fp(w, X[1])]
        fn = [hinge_loss_fn(w, X[2])]
        expected = 0.3 * sum(fp) / 2 + 2.0 * sum(fn) / 1
        assert ter_loss(w, X, y, cw) == pytest.approx(expected, rel=1e-15)
        # hand check: fp = (1.5, 0), fn = 0.8
        assert expected == pytest.approx(0.3 * 0.75 + 1.6)

    def test_ter_missing_class_contributes_zero(self):
        X = np.array([[1.0, 0.0]])
        assert ter_loss(np.zeros(2), X, [1]) == 1.0


class TestPerceptron:
    def test_mistake_at_zero(self):
        s = LearnerState.new("perceptron", 2)
        rec = perceptron_update(s, np.array([1.0, 2.0]), -1)
        np.testing.assert_array_equal(s.weights, [-1, -2])
        assert not rec.skipped

    def test_correct_skips(self):
        s = state_with("perceptron", [1.0, 0.0])
        rec = perceptron_update(s, np.array([2.0, 0.0]), 1)
        np.testing.assert_array_equal(s.weights, [1, 0])
        assert rec.skipped and rec.weight_delta_norm == 0

    def test_rule(self):
        s = state_with("perceptron", [1.0, 0.0])
        perceptron_update(s, np.array([1.0, 1.0]), -1)
        np.testing.assert_array_equal(s.weights, [0, -1])

    def test_aggregates_untouched(self):
        rng = np.random.default_rng(3)
        s = LearnerState.new("perceptron", 3)
        run_stream(s, *random_stream(rng, 50, 3))
        assert s.aggregates.n_neg == s.aggregates.n_pos == 0
        assert not s.aggregates.z_neg.any() and not s.aggregates.z_pos.any()


class TestPA:
    def test_unit_step(self):
        s = LearnerState.new("pa", 2)
        rec = pa_update(s, np.array([1.0, 0.0]), 1)
        assert rec.tau == 1.0
        np.testing.assert_array_equal(s.weights, [1, 0])

    def test_margin_met(self):
        s = state_with("pa", [3.0, 0.0])
        rec = pa_update(s, np.array([1.0, 0.0]), 1)
        assert rec.tau == 0.0 and rec.skipped
        np.testing.assert_array_equal(s.weights, [3, 0])

    def test_half_step(self):
        s = LearnerState.new("pa", 2)
        rec = pa_update(s, np.array([1.0, 1.0]), -1)
        assert rec.tau == 0.5
        np.testing.assert_array_equal(s.weights, [-0.5, -0.5])

    def test_overflowing_step_reported(self):
        s = LearnerState.new("pa", 2)
        with pytest.raises(NumericalFault):
            pa_update(s, np.full(2, 1e-160), 1)
        assert s.step_count == 0 and not s.weights.any()

    def test_zero_vector_flagged(self):
        s = LearnerState.new("pa", 2)
        rec = pa_update(s, np.zeros(2), 1)
        assert rec.skipped and rec.loss == 1.0 and rec.tau == 0.0
        np.testing.assert_array_equal(s.weights, [0, 0])

    @settings(max_examples=200, deadline=None)
    @given(w=arrays(np.float64, 3, elements=st.floats(-5, 5)),
           x=arrays(np.float64, 3, elements=st.floats(-5, 5)),
           y=st.sampled_from([-1, 1]))
    def test_passivity(self, w, x, y):
        s = state_with("pa", w)
        loss = hinge_loss_pa(w, x, y)
        sq = float(x @ x)
        if loss > 0 and 0 < sq and not np.isfinite(loss / sq):
            # step size overflows double precision: reported, state untouched
            with pytest.raises(NumericalFault):
                pa_update(s, x, y)
            np.testing.assert_array_equal(s.weights, w)
            assert s.step_count == 0
            return
        pa_update(s, x, y)
        if loss == 0:
            np.testing.assert_array_equal(s.weights, w)
        elif x @ x > 0:
            # the corrected weights satisfy the margin
            assert y * (s.weights @ x) == pytest.approx(1.0, abs=1e-9 * (1 + abs(w @ x)))


class TestAggregates:
    def test_first_samples(self):
        a = ClassAggregates.zeros(2)
        aggregate_step(a, np.array([1.0, 0.0]), 1, np.zeros(2))
        assert (a.n_pos, a.n_neg) == (1, 0)
        np.testing.assert_array_equal(a.z_pos, [1, 0])
        assert a.k_pos == 1.0
        np.testing.assert_array_equal(a.z_neg, [0, 0])
        assert a.k_neg == 0.0
        aggregate_step(a, np.array([0.0, 1.0]), -1, np.array([1.0, 0.0]))
        assert a.n_neg == 1
        np.testing.assert_array_equal(a.z_neg, [0, 1])
        assert a.k_neg == 1.0

    def test_long_stream_matches_summation(self):
        rng = np.random.default_rng(11)
        X, y = random_stream(rng, 1000, 4)
        a = ClassAggregates.zeros(4)
        for x, yi in zip(X, y):
            aggregate_step(a, x, yi, np.zeros(4))
        z_neg, z_pos = direct_class_means(X, y)
        np.testing.assert_allclose(a.z_neg, z_neg, rtol=1e-10, atol=1e-12)
        np.testing.assert_allclose(a.z_pos, z_pos, rtol=1e-10, atol=1e-12)

    def test_class_silence(self):
        rng = np.random.default_rng(5)
        s = LearnerState.new("pater2", 3)
        X = rng.standard_normal((200, 3))
        run_stream(s, X, np.ones(200, dtype=int))
        a = s.aggregates
        assert a.n_neg == 0 and a.k_neg == 0.0 and not a.z_neg.any()
        assert a.n_pos == 200


class TestPaterHandReplay:
    """Two-step stream x1=(1,0),y=+1 then x2=(0,1),y=-1."""

    X = np.array([[1.0, 0.0], [0.0, 1.0]])
    y = np.array([1, -1])

    def test_pater1_first_step(self):
        s = LearnerState.new("pater1", 2)
        rec = pater_update(s, self.X[0], 1)
        assert rec.tau == 1.0
        np.testing.assert_array_equal(s.weights, [1, 0])

    def test_pater1(self):
        s = LearnerState.new("pater1", 2)
        pater_update(s, self.X[0], 1)
        rec = pater_update(s, self.X[1], -1)
        assert rec.tau == 0.5
        np.testing.assert_array_equal(s.weights, [1.5, -0.5])

    def test_pater2(self):
        s = LearnerState.new("pater2", 2)
        pater_update(s, self.X[0], 1)
        rec = pater_update(s, self.X[1], -1)
        assert (s.aggregates.k_neg, s.aggregates.k_pos) == (1.0, 1.0)
        assert rec.tau == 1.0
        np.testing.assert_array_equal(s.weights, [2, -1])

    @pytest.mark.parametrize("variant", ["pater1", "pater2"])
    def test_against_nonrecursive(self, variant):
        expected, _ = nonrecursive_pater(self.X, self.y, variant)
        s = LearnerState.new(variant, 2)
        for x, yi in zip(self.X, self.y):
            pater_update(s, x, yi)
        np.testing.assert_array_equal(s.weights, expected[-1])


class TestPaterTau:
    def test_tau_matches_closed_form_from_scratch(self):
        rng = np.random.default_rng(21)
        X, y = random_stream(rng, 300, 5)
        s = LearnerState.new("pater1", 5)
        for t, (x, yi) in enumerate(zip(X, y)):
            w_prev = s.weights.copy()
            rec, _ = online_step(s, x, yi)
            lam_neg, lam_pos = (1 - yi) / 2, (1 + yi) / 2
            n_neg = np.sum(y[: t + 1] == -1)
            n_pos = np.sum(y[: t + 1] == 1)
            z_neg, z_pos = direct_class_means(X[: t + 1], y[: t + 1])
            z = z_pos - z_neg
            num = 0.0
            if lam_neg:
                num += lam_neg / n_neg * (1 + w_prev @ x)
            if lam_pos:
                num += lam_pos / n_pos * (1 - w_prev @ x)
            assert rec.tau == pytest.approx(num / (z @ z), rel=1e-9, abs=1e-12)

    def test_degenerate_direction_skipped(self):
        # identical first samples of both classes give z_pos == z_neg
        s = LearnerState.new("pater1", 2)
        pater_update(s, np.array([1.0, 1.0]), 1)
        w = s.weights.copy()
        rec = pater_update(s, np.array([1.0, 1.0]), -1)
        assert rec.skipped and rec.tau == 0.0 and rec.weight_delta_norm == 0.0
        np.testing.assert_array_equal(s.weights, w)
        assert s.step_count == 2

    def test_tau_can_be_negative_and_clip(self):
        rng = np.random.default_rng(0)
        X, y = random_stream(rng, 400, 2, shift=2.0)
        taus = [r.tau for r in run_stream(LearnerState.new("pater1", 2), X, y, True)[1]]
        assert min(taus) < 0
        clipped = LearnerState.new("pater1", 2, clip_tau=True)
        taus_c = [r.tau for r in run_stream(clipped, X, y, True)[1]]
        assert min(taus_c) >= 0

    def test_pater_tau_requires_aggregated_sample(self):
        s = LearnerState.new("wpater2", 2, ClassWeights(0.5, 2.0))
        x = np.array([1.0, 2.0])
        dot = aggregate_step(s.aggregates, x, 1, s.weights)
        tau, z, skipped = pater_tau(s, 1, dot)
        np.testing.assert_array_equal(z, [2.0, 4.0])
        assert tau == pytest.approx(2.0 * 1.0 / 20.0)
        assert not skipped


class TestApplyUpdate:
    def test_identity(self):
        s = state_with("pater1", [1.0, 2.0])
        apply_update(s, 0.0, np.array([5.0, 5.0]))
        np.testing.assert_array_equal(s.weights, [1, 2])
        assert s.step_count == 1

    def test_linear_combination(self):
        s = state_with("pater1", [1.0, 0.0])
        apply_update(s, 0.5, np.array([1.0, -1.0]))
        np.testing.assert_array_equal(s.weights, [1.5, -0.5])

    @pytest.mark.parametrize("tau", [np.nan, np.inf, -np.inf])
    def test_non_finite(self, tau):
        s = LearnerState.new("pater1", 2)
        with pytest.raises(NumericalFault):
            apply_update(s, tau, np.ones(2))

    def test_direction_dimension(self):
        s = LearnerState.new("pater1", 2)
        with pytest.raises(DimensionError):
            apply_update(s, 1.0, np.ones(3))

    def test_weighted_three_step_stream(self):
        X = np.array([[1.0, 0.5], [-0.5, 1.0], [2.0, -1.0]])
        y = np.array([1, -1, -1])
        expected, _ = nonrecursive_pater(X, y, "wpater1", 0.5, 1.0)
        s = LearnerState.new("wpater1", 2, ClassWeights(0.5, 1.0))
        for x, yi in zip(X, y):
            pater_update(s, x, yi)
        np.testing.assert_allclose(s.weights, expected[-1], rtol=1e-13)


class TestOnlineStep:
    def test_prequential_prediction_before_update(self):
        s = LearnerState.new("perceptron", 2)
        rec, pred = online_step(s, np.array([1.0, 2.0]), -1)
        assert pred == 1  # zero weights predict +1
        np.testing.assert_array_equal(s.weights, [-1, -2])

    @pytest.mark.parametrize("variant", list(Variant))
    def test_replay_determinism(self, variant):
        rng = np.random.default_rng(99)
        X, y = random_stream(rng, 500, 4)
        a = LearnerState.new(variant, 4)
        b = LearnerState.new(variant, 4)
        run_stream(a, X, y)
        run_stream(b, X, y)
        np.testing.assert_array_equal(a.weights, b.weights)

    @pytest.mark.parametrize("base", ["pater1", "pater2"])
    def test_unit_weights_reduce_to_unweighted(self, base):
        rng = np.random.default_rng(7)
        X, y = random_stream(rng, 500, 3)
        a = LearnerState.new(base, 3)
        b = LearnerState.new("w" + base, 3, ClassWeights(1.0, 1.0))
        for x, yi in zip(X, y):
            ra, _ = online_step(a, x, yi)
            rb, _ = online_step(b, x, yi)
            assert ra.tau == rb.tau
            assert np.array_equal(a.weights, b.weights)

    def test_rejects_bad_inputs(self):
        s = LearnerState.new("pater1", 3)
        with pytest.raises(DimensionError):
            online_step(s, np.ones(2), 1)
        with pytest.raises(DimensionError):
            online_step(s, np.ones(4), 1)
        with pytest.raises(InvalidLabelError):
            online_step(s, np.ones(3), 0)
        with pytest.raises(ValueError):
            online_step(s, np.array([1.0, np.nan, 0.0]), 1)

    def test_step_count_matches_class_counts(self):
        rng = np.random.default_rng(1)
        for variant in TER:
            s = LearnerState.new(variant, 2)
            X, y = random_stream(rng, 137, 2)
            run_stream(s, X, y)
            assert s.step_count == s.aggregates.n_neg + s.aggregates.n_pos == 137


class TestStateConstruction:
    def test_unweighted_rejects_alpha(self):
        with pytest.raises(ValueError):
            LearnerState.new("pater1", 2, ClassWeights(0.5, 1.0))

    @pytest.mark.parametrize("bad", [0.0, -1.0, np.inf, np.nan])
    def test_alpha_positive(self, bad):
        with pytest.raises(ValueError):
            ClassWeights(bad, 1.0)

    def test_variant_aliases(self):
        assert Variant.parse("wPATER-II") is Variant.WPATER_II
        assert Variant.parse("PE") is Variant.PERCEPTRON
        with pytest.raises(ValueError, match="valid variants"):
            Variant.parse("pater3")

    def test_estimator_wrapper(self):
        clf = OnlineLearner("pa").fit([[1.0, 0.0], [-1.0, 0.0]], [1, -1])
        np.testing.assert_array_equal(clf.predict([[3.0, 1.0], [-2.0, 0.0]]), [1, -1])


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), d=st.integers(1, 6), n=st.integers(1, 120),
       variant=st.sampled_from(TER))
def test_recursions_match_replay_oracle(seed, d, n, variant):
    rng = np.random.default_rng(seed)
    X, y = random_stream(rng, n, d)
    s = LearnerState.new(variant, d)
    history = []
    for x, yi in zip(X, y):
        history.append(s.weights.copy())
        online_step(s, x, yi)
    z_neg, z_pos = direct_class_means(X, y)
    k_neg, k_pos = replay_k(X, y, history)
    a = s.aggregates
    np.testing.assert_allclose(a.z_neg, z_neg, rtol=1e-10, atol=1e-12)
    np.testing.assert_allclose(a.z_pos, z_pos, rtol=1e-10, atol=1e-12)
    scale = 1.0 + np.abs(np.einsum("ij,ij->i", np.array(history), X)).mean()
    assert abs(a.k_neg - k_neg) <= 1e-10 * scale
    assert abs(a.k_pos - k_pos) <= 1e-10 * scale
