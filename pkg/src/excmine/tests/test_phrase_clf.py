import numpy as np
import pytest

from excmine.dataset import CATEGORIES, NUM_CATEGORIES, Category
from excmine.errors import EmptyInput, LengthMismatch, WidthMismatch
from excmine.trainers.phrase_clf.__main__ import train_softmax
from excmine.trainers.phrase_clf.model import (
    SoftmaxModel,
    balanced_sample_weights,
    classify_phrases,
    predict,
    softmax,
    softmax_cross_entropy,
)
from excmine.trainers.phrase_clf.params import ClfParams


def test_zero_model_predicts_first_category():
    model = SoftmaxModel(np.zeros((NUM_CATEGORIES, 5)), np.zeros(NUM_CATEGORIES))
    category, probs = predict(model, np.ones(5))
    assert category is Category.AgeHeight
    np.testing.assert_allclose(probs, np.full(NUM_CATEGORIES, 1 / 11), atol=1e-15)


def test_probabilities_normalized_and_shift_invariant():
    rng = np.random.default_rng(4)
    for _ in range(20):
        logits = rng.normal(scale=10, size=NUM_CATEGORIES)
        probs = softmax(logits)
        assert probs.sum() == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(softmax(logits + 123.0), probs, atol=1e-12)


def test_predict_width_mismatch():
    model = SoftmaxModel(np.zeros((NUM_CATEGORIES, 5)), np.zeros(NUM_CATEGORIES))
    with pytest.raises(WidthMismatch):
        predict(model, np.ones(4))


def test_model_rejects_bad_shapes():
    with pytest.raises(ValueError):
        SoftmaxModel(np.zeros((3, 5)), np.zeros(3))
    with pytest.raises(ValueError):
        SoftmaxModel(np.full((NUM_CATEGORIES, 2), np.nan), np.zeros(NUM_CATEGORIES))


@pytest.mark.parametrize("l2_lambda", [0.0, 1e-3])
def test_gradient_matches_finite_differences(l2_lambda):
    rng = np.random.default_rng(8)
    h = 1e-5
    for _ in range(50):
        n, width = int(rng.integers(1, 8)), int(rng.integers(1, 6))
        x = rng.normal(size=(n, width))
        y = rng.integers(0, NUM_CATEGORIES, size=n)
        weights = rng.normal(size=(NUM_CATEGORIES, width))
        bias = rng.normal(size=NUM_CATEGORIES)
        sample_weight = rng.uniform(0.5, 2.0, size=n) if rng.random() < 0.5 else None
        _, grad_w, grad_b = softmax_cross_entropy(weights, bias, x, y, l2_lambda, sample_weight)

        for array, grad in ((weights, grad_w), (bias, grad_b)):
            for index in np.ndindex(array.shape):
                original = array[index]
                array[index] = original + h
                plus = softmax_cross_entropy(weights, bias, x, y, l2_lambda, sample_weight)[0]
                array[index] = original - h
                minus = softmax_cross_entropy(weights, bias, x, y, l2_lambda, sample_weight)[0]
                array[index] = original
                numeric = (plus - minus) / (2 * h)
                assert abs(grad[index] - numeric) <= 1e-4 * max(1.0, abs(numeric))


def test_bias_is_not_regularized():
    x = np.zeros((1, 2))
    loss_a, _, grad_b = softmax_cross_entropy(np.zeros((NUM_CATEGORIES, 2)), np.full(NUM_CATEGORIES, 3.0), x, np.array([0]), 1.0)
    assert loss_a == pytest.approx(np.log(NUM_CATEGORIES))
    assert grad_b[0] == pytest.approx(1 / 11 - 1)


def separable_data(rng, categories, per_class=10):
    features, labels = [], []
    for i, category in enumerate(categories):
        center = np.zeros(len(categories))
        center[i] = 3.0
        for _ in range(per_class):
            features.append(center + rng.uniform(-0.5, 0.5, size=len(categories)))
            labels.append(category)
    return features, labels


def test_separable_two_class_set():
    rng = np.random.default_rng(10)
    features, labels = separable_data(rng, [Category.Price, Category.Parking])
    model = train_softmax(ClfParams(learning_rate=0.1, epochs=200), features, labels)
    predictions = [predict(model, x)[0] for x in features]
    assert predictions == labels


def test_separable_all_classes_minibatch():
    rng = np.random.default_rng(12)
    features, labels = separable_data(rng, list(CATEGORIES), per_class=5)
    model = train_softmax(ClfParams(learning_rate=0.1, epochs=100, batch_size=8, l2_lambda=0.0), features, labels)
    assert [predict(model, x)[0] for x in features] == labels


def test_full_batch_loss_is_non_increasing():
    rng = np.random.default_rng(13)
    features, labels = separable_data(rng, [Category.Food, Category.Time, Category.Queues], per_class=6)
    model = train_softmax(ClfParams(learning_rate=0.05, epochs=50), features, labels)
    history = model.history
    assert len(history) == 50
    assert all(b <= a + 1e-12 for a, b in zip(history, history[1:]))
    assert history[0] == pytest.approx(np.log(NUM_CATEGORIES))


def test_training_is_deterministic():
    rng = np.random.default_rng(14)
    features, labels = separable_data(rng, [Category.Food, Category.Crowd], per_class=7)
    config = ClfParams(learning_rate=0.3, epochs=20, batch_size=3, seed=5)
    first = train_softmax(config, features, labels)
    second = train_softmax(config, features, labels)
    np.testing.assert_array_equal(first.weights, second.weights)
    np.testing.assert_array_equal(first.bias, second.bias)


def test_balanced_weights():
    labels = np.array([0, 0, 0, 1])
    weights = balanced_sample_weights(labels)
    np.testing.assert_allclose(weights, [4 / 6, 4 / 6, 4 / 6, 2.0])
    assert weights[labels == 0].sum() == pytest.approx(weights[labels == 1].sum())


def test_training_errors():
    config = ClfParams(epochs=1)
    with pytest.raises(EmptyInput):
        train_softmax(config, [], [])
    with pytest.raises(LengthMismatch):
        train_softmax(config, [[1.0]], [Category.Food, Category.Time])
    with pytest.raises(WidthMismatch):
        train_softmax(config, [[1.0], [1.0, 2.0]], [Category.Food, Category.Time])


def test_classify_phrases(embeddings, keyword_index, toy_dataset):
    features = [toy_dataset.phrases[0], toy_dataset.phrases[1]]
    model = SoftmaxModel(np.zeros((NUM_CATEGORIES, embeddings.dim + 12)), np.zeros(NUM_CATEGORIES), keyword_index, embeddings)
    classified = classify_phrases(model, toy_dataset.by_id, features)
    assert [p.category for p in classified] == [Category.AgeHeight, Category.AgeHeight]
    assert [p.span for p in classified] == [p.span for p in features]
