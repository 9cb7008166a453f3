"""Multiclass perceptron baseline over bipolar patterns.

Weights are C x (D+1) with the bias folded in as a constant +1 feature.
On a mistake the input is added to the true class row and subtracted from
the predicted row; presentation order equals input order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, UsageError
from .patterns import BipolarPattern


@dataclass(frozen=True)
class Perceptron:
    weights: np.ndarray  # shape (classes, dimension + 1)
    classes: int
    dimension: int
    mistake_counts: tuple[int, ...] = ()

    def __post_init__(self):
        if not np.all(np.isfinite(self.weights)):
            raise UsageError("perceptron weights must be finite")


def _features(pattern: BipolarPattern) -> np.ndarray:
    return np.concatenate([pattern.values.astype(np.float64), [1.0]])


def perceptron_margins(model: Perceptron, pattern: BipolarPattern) -> np.ndarray:
    if pattern.dimension != model.dimension:
        raise DimensionError(
            f"pattern dimension {pattern.dimension} does not match model dimension {model.dimension}"
        )
    return model.weights @ _features(pattern)


def perceptron_predict(model: Perceptron, pattern: BipolarPattern) -> int:
    """Argmax class; score ties go to the lowest class index."""
    return int(np.argmax(perceptron_margins(model, pattern)))


def perceptron_train(
    data, epochs: int, learning_rate: float = 1.0, classes: int | None = None
) -> tuple[Perceptron, bool]:
    """Train with the multiclass mistake rule; stop early on a clean epoch.

    ``converged`` is True iff some full epoch made zero mistakes within the
    budget. ``epochs == 0`` returns zero weights and False. ``classes`` can
    pin the class count when the data covers only part of the label space.
    """
    data = list(data)
    if not data:
        raise UsageError("training data must be non-empty")
    labels = [int(label) for _, label in data]
    if min(labels) < 0:
        raise UsageError("class labels must be >= 0")
    if classes is None:
        classes = max(labels) + 1
    elif classes <= max(labels):
        raise UsageError("classes must exceed the largest label")
    dim = data[0][0].dimension
    for pattern, _ in data:
        if pattern.dimension != dim:
            raise DimensionError("mixed pattern dimensions in training data")
    weights = np.zeros((classes, dim + 1), dtype=np.float64)
    feats = [_features(p) for p, _ in data]
    counts: list[int] = []
    converged = False
    for _ in range(epochs):
        mistakes = 0
        for phi, label in zip(feats, labels):
            pred = int(np.argmax(weights @ phi))
            if pred != label:
                weights[label] += learning_rate * phi
                weights[pred] -= learning_rate * phi
                mistakes += 1
        counts.append(mistakes)
        if mistakes == 0:
            converged = True
            break
    return (
        Perceptron(
            weights=weights,
            classes=classes,
            dimension=dim,
            mistake_counts=tuple(counts),
        ),
        converged,
    )
