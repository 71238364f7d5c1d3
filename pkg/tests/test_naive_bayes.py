import numpy as np
import pytest

from linclass.data import Dataset
from linclass import naive_bayes as nb


def binary_dataset(rng, m=60, n=4, k=2):
    feats = (rng.random((m, n)) < 0.4).astype(float)
    labels = rng.integers(1, k + 1, m)
    # guarantee non-empty classes
    labels[:k] = np.arange(1, k + 1)
    return Dataset(feats, labels, k)


class TestFitDiscrete:
    def test_smoothed_cond_prob(self):
        # class 1: 10 samples, 3 positives in feature 0
        feats = np.zeros((20, 1))
        feats[:3, 0] = 1.0
        labels = np.array([1] * 10 + [2] * 10)
        model = nb.fit_discrete(Dataset(feats, labels, 2), alpha=1.0)
        assert model.cond_prob[0, 0] == pytest.approx(4 / 12)
        assert model.prior[0] == pytest.approx(11 / 22)

    def test_unsmoothed_ratio(self):
        feats = np.zeros((20, 1))
        feats[:3, 0] = 1.0
        labels = np.array([1] * 10 + [2] * 10)
        model = nb.fit_discrete(Dataset(feats, labels, 2), alpha=0.0)
        assert model.cond_prob[0, 0] == pytest.approx(0.3)

    def test_counting_oracle_exact(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            k = int(rng.integers(2, 5))
            d = binary_dataset(rng, m=int(rng.integers(10, 200)), n=5, k=k)
            alpha = float(rng.choice([0.5, 1.0, 2.0]))
            model = nb.fit_discrete(d, alpha)
            # independent integer-count oracle
            for c in range(k):
                in_class = d.labels == c + 1
                cnt = int(in_class.sum())
                for i in range(d.n):
                    pos = int((d.features[in_class, i] == 1.0).sum())
                    expected = (pos + alpha) / (cnt + k * alpha)
                    assert model.cond_prob[c, i] == expected
                assert model.prior[c] == (cnt + alpha) / (d.m + k * alpha)

    def test_non_binary_feature_rejected(self):
        d = Dataset(np.array([[0.5], [1.0]]), np.array([1, 2]), 2)
        with pytest.raises(ValueError, match="0, 1"):
            nb.fit_discrete(d)

    def test_empty_class_with_zero_alpha(self):
        d = Dataset(np.zeros((4, 1)), np.array([1, 1, 1, 1]), 2)
        with pytest.raises(ValueError, match="empty class"):
            nb.fit_discrete(d, alpha=0.0)

    def test_alpha_pulls_toward_half(self):
        feats = np.zeros((20, 1))
        feats[:2, 0] = 1.0  # ratio 0.2 < 1/2
        labels = np.array([1] * 10 + [2] * 10)
        probs = [nb.fit_discrete(Dataset(feats, labels, 2), a).cond_prob[0, 0]
                 for a in (0.0, 0.5, 1.0, 2.0, 10.0)]
        assert all(b > a for a, b in zip(probs, probs[1:]))
        assert all(p < 0.5 for p in probs)

    def test_smoothed_probs_strictly_interior(self):
        d = Dataset(np.zeros((4, 2)), np.array([1, 1, 2, 2]), 2)
        model = nb.fit_discrete(d, alpha=1.0)
        assert np.all(model.cond_prob > 0) and np.all(model.cond_prob < 1)
        assert model.prior.sum() == pytest.approx(1.0, abs=1e-12)


class TestFitGaussian:
    def test_pooled_mle_variance(self):
        feats = np.array([[0.0], [1.0], [0.2], [0.4]])
        labels = np.array([1, 1, 2, 2])
        model = nb.fit_gaussian(Dataset(feats, labels, 2))
        assert model.sigma2[0] == pytest.approx(0.5 * 0.25 + 0.5 * 0.01)
        assert model.mu[0, 0] == pytest.approx(0.5)
        assert model.mu[1, 0] == pytest.approx(0.3)
        assert model.prior.tolist() == [0.5, 0.5]

    def test_variance_floor(self):
        feats = np.array([[0.3], [0.3], [0.7], [0.7]])
        labels = np.array([1, 1, 2, 2])
        model = nb.fit_gaussian(Dataset(feats, labels, 2))
        assert model.sigma2[0] == nb.VARIANCE_FLOOR

    def test_two_pass_oracle(self):
        rng = np.random.default_rng(1)
        for _ in range(10):
            k = int(rng.integers(2, 5))
            m = int(rng.integers(2 * k, 100))
            feats = rng.random((m, 3))
            labels = rng.integers(1, k + 1, m)
            labels[:k] = np.arange(1, k + 1)
            d = Dataset(feats, labels, k)
            model = nb.fit_gaussian(d)
            s2 = np.zeros(3)
            for c in range(k):
                rows = feats[labels == c + 1]
                mu = rows.sum(axis=0) / len(rows)
                np.testing.assert_allclose(model.mu[c], mu, rtol=1e-12)
                s2 += (len(rows) / m) * ((rows - mu) ** 2).sum(axis=0) / len(rows)
            np.testing.assert_allclose(model.sigma2, np.maximum(s2, nb.VARIANCE_FLOOR),
                                       rtol=1e-12)

    def test_empty_class(self):
        d = Dataset(np.zeros((3, 1)), np.array([1, 1, 1]), 2)
        with pytest.raises(ValueError, match="empty class"):
            nb.fit_gaussian(d)


class TestActivation:
    def test_discrete_symmetry(self):
        model = nb.DiscreteNBModel(np.full((2, 1), 0.5), np.array([0.5, 0.5]), 1.0)
        x = np.array([1.0])
        assert nb.activation(model, x, 1) == nb.activation(model, x, 2)

    def test_gaussian_at_class_mean(self):
        model = nb.GaussianNBModel(np.array([[0.2, 0.8], [0.5, 0.5]]),
                                   np.array([0.1, 0.2]), np.array([0.3, 0.7]))
        expected = np.sum(np.log(1.0 / np.sqrt(2 * np.pi * model.sigma2))) + np.log(0.3)
        assert nb.activation(model, model.mu[0], 1) == pytest.approx(expected)

    def test_pair_activation_symmetric_model(self):
        model = nb.GaussianNBModel(np.array([[0.4], [0.4]]), np.array([0.2]),
                                   np.array([0.5, 0.5]))
        assert nb.pair_activation(model, np.array([0.9]), 1, 2) == pytest.approx(0.0)

    def test_telescoping(self):
        rng = np.random.default_rng(2)
        d = Dataset(rng.random((30, 4)), rng.integers(1, 4, 30), 3)
        d.labels[:3] = [1, 2, 3]
        model = nb.fit_gaussian(d)
        for x in rng.random((20, 4)):
            lhs = nb.pair_activation(model, x, 1, 3)
            rhs = nb.pair_activation(model, x, 1, 2) + nb.pair_activation(model, x, 2, 3)
            assert lhs == pytest.approx(rhs, abs=1e-9)

    def test_dimension_mismatch(self):
        model = nb.GaussianNBModel(np.zeros((2, 3)), np.ones(3), np.array([0.5, 0.5]))
        with pytest.raises(ValueError, match="features"):
            nb.activation(model, np.zeros(2), 1)


class TestPredict:
    def test_tie_breaks_to_lowest_index(self):
        model = nb.DiscreteNBModel(np.full((2, 1), 0.5), np.array([0.5, 0.5]), 1.0)
        assert nb.predict(model, np.array([1.0])) == 1

    def test_gaussian_at_well_separated_mean(self):
        model = nb.GaussianNBModel(np.array([[0.0], [10.0]]), np.array([0.5]),
                                   np.array([0.5, 0.5]))
        assert nb.predict(model, np.array([10.0])) == 2

    def test_brute_force_argmax_oracle(self):
        rng = np.random.default_rng(3)
        d = Dataset(rng.random((40, 3)), rng.integers(1, 5, 40), 4)
        d.labels[:4] = [1, 2, 3, 4]
        model = nb.fit_gaussian(d)
        for x in rng.random((100, 3)):
            scores = [nb.activation(model, x, k) for k in range(1, 5)]
            assert nb.predict(model, x) == int(np.argmax(scores)) + 1

    def test_invariant_under_constant_shift(self):
        rng = np.random.default_rng(4)
        d = Dataset(rng.random((40, 3)), rng.integers(1, 3, 40), 2)
        d.labels[:2] = [1, 2]
        model = nb.fit_gaussian(d)
        x = rng.random((10, 3))
        a = nb.activations(model, x)
        assert np.array_equal(np.argmax(a, axis=-1), np.argmax(a + 123.4, axis=-1))


class TestToLinear:
    def test_discrete_symmetric_gives_zero_weights(self):
        model = nb.DiscreteNBModel(np.full((2, 3), 0.5), np.array([0.5, 0.5]), 1.0)
        h = nb.to_linear(model)
        assert np.all(h.weights == 0.0)
        assert h.biases[0] == h.biases[1]

    def test_gaussian_zero_means(self):
        model = nb.GaussianNBModel(np.zeros((2, 3)), np.ones(3), np.array([0.5, 0.5]))
        assert np.all(nb.to_linear(model).weights == 0.0)

    def test_saturated_probability_rejected(self):
        model = nb.DiscreteNBModel(np.array([[0.0], [0.5]]), np.array([0.5, 0.5]), 0.0)
        with pytest.raises(ValueError, match="alpha"):
            nb.to_linear(model)

    @pytest.mark.parametrize("kind", ["discrete", "gaussian"])
    def test_argmax_equivalence(self, kind):
        rng = np.random.default_rng(5)
        if kind == "discrete":
            d = binary_dataset(rng, m=100, n=5, k=3)
            model = nb.fit_discrete(d, alpha=1.0)
            xs = (rng.random((1000, 5)) < 0.5).astype(float)
        else:
            d = Dataset(rng.random((100, 5)), rng.integers(1, 4, 100), 3)
            d.labels[:3] = [1, 2, 3]
            model = nb.fit_gaussian(d)
            xs = rng.random((1000, 5))
        h = nb.to_linear(model)
        lin = np.argmax(h.scores(xs), axis=-1) + 1
        assert np.array_equal(lin, nb.predict(model, xs))

    def test_norm_bounds_recomputed(self):
        h = nb.LinearHypothesis(np.array([[3.0, 4.0], [0.0, 1.0]]), np.array([-2.0, 1.0]))
        assert h.weight_norm_bound == 5.0
        assert h.bias_bound == 2.0


class TestSerialization:
    @pytest.mark.parametrize("kind", ["discrete", "gaussian", "linear"])
    def test_round_trip_bit_exact(self, tmp_path, kind):
        rng = np.random.default_rng(6)
        if kind == "discrete":
            model = nb.fit_discrete(binary_dataset(rng), alpha=1.0)
        elif kind == "gaussian":
            d = Dataset(rng.random((30, 3)), rng.integers(1, 3, 30), 2)
            d.labels[:2] = [1, 2]
            model = nb.fit_gaussian(d)
        else:
            model = nb.LinearHypothesis(rng.normal(size=(2, 3)), rng.normal(size=2))
        path = tmp_path / "model.json"
        nb.save_model(model, path)
        back = nb.load_model(path)
        assert type(back) is type(model)
        for field in ("cond_prob", "prior", "mu", "sigma2", "weights", "biases"):
            if hasattr(model, field):
                assert np.array_equal(getattr(model, field), getattr(back, field))
