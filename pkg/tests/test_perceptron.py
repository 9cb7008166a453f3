from __future__ import annotations

import itertools

import numpy as np
import pytest

from autotrain.errors import UsageError
from autotrain.perceptron import (
    perceptron_margins,
    perceptron_predict,
    perceptron_train,
)
from autotrain.patterns import BipolarPattern


def bipolar(*values) -> BipolarPattern:
    return BipolarPattern(np.array(values, dtype=np.int8))


AND_DATA = [
    (bipolar(1, 1), 1),
    (bipolar(1, -1), 0),
    (bipolar(-1, 1), 0),
    (bipolar(-1, -1), 0),
]

XOR_DATA = [
    (bipolar(1, 1), 0),
    (bipolar(1, -1), 1),
    (bipolar(-1, 1), 1),
    (bipolar(-1, -1), 0),
]


def exhibit_and_separator() -> np.ndarray:
    """A feature-space separator for AND over bipolar inputs, found by search."""
    feats = [np.array([x.values[0], x.values[1], 1.0]) for x, _ in AND_DATA]
    signs = [1.0 if label == 1 else -1.0 for _, label in AND_DATA]
    for v in itertools.product((-2, -1, 1, 2), repeat=3):
        vec = np.array(v, dtype=float)
        if all(s * (vec @ f) > 0 for s, f in zip(signs, feats)):
            return vec
    raise AssertionError("no separator found for AND")


class TestTrain:
    def test_and_converges(self):
        model, converged = perceptron_train(AND_DATA, epochs=50)
        assert converged
        for pattern, label in AND_DATA:
            assert perceptron_predict(model, pattern) == label

    def test_and_within_classical_mistake_bound(self):
        separator = exhibit_and_separator()
        feats = [np.array([x.values[0], x.values[1], 1.0]) for x, _ in AND_DATA]
        signs = [1.0 if label == 1 else -1.0 for _, label in AND_DATA]
        unit = separator / np.linalg.norm(separator)
        gamma = min(s * (unit @ f) for s, f in zip(signs, feats))
        radius = max(np.linalg.norm(f) for f in feats)
        # two-class updates move the row difference by 2*phi per mistake,
        # so the classical bound applies to (R/gamma)^2 mistakes
        bound = (radius / gamma) ** 2
        model, converged = perceptron_train(AND_DATA, epochs=200)
        assert converged
        assert sum(model.mistake_counts) <= bound

    def test_xor_has_no_linear_separator(self):
        # brute force over a weight grid: nothing separates XOR
        feats = [np.array([x.values[0], x.values[1], 1.0]) for x, _ in XOR_DATA]
        signs = [1.0 if label == 1 else -1.0 for _, label in XOR_DATA]
        for v in itertools.product(np.linspace(-2, 2, 9), repeat=3):
            vec = np.array(v)
            assert not all(s * (vec @ f) > 0 for s, f in zip(signs, feats))

    def test_xor_does_not_converge(self):
        _, converged = perceptron_train(XOR_DATA, epochs=1000)
        assert not converged

    def test_zero_epochs_zero_weights(self):
        model, converged = perceptron_train(AND_DATA, epochs=0)
        assert not converged
        assert np.all(model.weights == 0.0)

    def test_prediction_tie_breaks_to_lowest_class(self):
        model, _ = perceptron_train(AND_DATA, epochs=0)
        assert perceptron_predict(model, bipolar(1, 1)) == 0

    def test_margins_shape(self):
        model, _ = perceptron_train(AND_DATA, epochs=5)
        assert perceptron_margins(model, bipolar(1, -1)).shape == (2,)

    def test_explicit_class_count(self):
        model, _ = perceptron_train(AND_DATA, epochs=5, classes=4)
        assert model.classes == 4
        with pytest.raises(UsageError):
            perceptron_train(AND_DATA, epochs=5, classes=1)

    def test_empty_data_rejected(self):
        with pytest.raises(UsageError):
            perceptron_train([], epochs=5)

    def test_three_class_problem(self):
        data = [
            (bipolar(1, 1, 1), 0),
            (bipolar(-1, -1, 1), 1),
            (bipolar(1, -1, -1), 2),
        ]
        model, converged = perceptron_train(data, epochs=100)
        assert converged
        for pattern, label in data:
            assert perceptron_predict(model, pattern) == label
