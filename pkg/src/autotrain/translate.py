"""Request/response translators bridging the network backends and retrieval.

Each translator maps an encoded utterance pattern to a query pattern in the
case-pattern space. The Hopfield translator cleans the probe by energy
descent; the Boltzmann and Perceptron translators classify to the nearest
known request pattern (via a per-case output code or a class label).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .boltzmann import AnnealSchedule, BoltzmannMachine, boltzmann_settle
from .errors import DimensionError
from .hopfield import HopfieldNet, hopfield_recall
from .patterns import BipolarPattern, agreement
from .perceptron import Perceptron, perceptron_margins
from .readout import FuzzyReadout, fuzzy_readout


def case_code(index: int, count: int) -> BipolarPattern:
    """Bipolar one-hot output code for case ``index`` among ``count`` cases."""
    values = np.full(count, -1, dtype=np.int8)
    values[index] = 1
    return BipolarPattern(values)


@dataclass
class HopfieldTranslator:
    """Recall-based cleanup against the stored lexical patterns.

    A probe that already equals a stored pattern is returned as-is (cleaning
    a clean signal is the identity); anything else goes through seeded
    asynchronous recall.
    """

    net: HopfieldNet
    stored: tuple[BipolarPattern, ...]
    labels: tuple[str, ...]
    max_sweeps: int = 20
    rng_seed: int = 0
    name: str = "hopfield"
    last_readout: FuzzyReadout | None = field(default=None, repr=False)

    def translate(self, pattern: BipolarPattern) -> BipolarPattern:
        if pattern.dimension != self.net.dimension:
            raise DimensionError(
                f"pattern dimension {pattern.dimension} does not match net dimension {self.net.dimension}"
            )
        if pattern in set(self.stored):
            state = pattern
        else:
            state, _ = hopfield_recall(self.net, pattern, self.max_sweeps, self.rng_seed)
        scores = [
            (label, agreement(state, stored))
            for label, stored in zip(self.labels, self.stored)
        ]
        self.last_readout = fuzzy_readout(scores, score_kind="margin")
        return state


@dataclass
class BoltzmannTranslator:
    """Settle the machine on the clamped input and decode the output code.

    The settled visible_out is matched to the nearest case code (agreement,
    ties to the lowest case index) and that case's request pattern becomes
    the query.
    """

    machine: BoltzmannMachine
    schedule: AnnealSchedule
    codes: tuple[BipolarPattern, ...]
    targets: tuple[BipolarPattern, ...]
    labels: tuple[str, ...]
    name: str = "boltzmann"
    last_readout: FuzzyReadout | None = field(default=None, repr=False)

    def translate(self, pattern: BipolarPattern) -> BipolarPattern:
        out = boltzmann_settle(self.machine, pattern, self.schedule)
        scores = [
            (label, agreement(out, code)) for label, code in zip(self.labels, self.codes)
        ]
        self.last_readout = fuzzy_readout(scores, score_kind="margin")
        best = max(range(len(self.codes)), key=lambda i: (scores[i][1], -i))
        return self.targets[best]


@dataclass
class PerceptronTranslator:
    """Classify the pattern and answer with the predicted class's request pattern."""

    model: Perceptron
    targets: tuple[BipolarPattern, ...]
    labels: tuple[str, ...]
    name: str = "perceptron"
    last_readout: FuzzyReadout | None = field(default=None, repr=False)

    def translate(self, pattern: BipolarPattern) -> BipolarPattern:
        margins = perceptron_margins(self.model, pattern)
        scores = [(label, float(m)) for label, m in zip(self.labels, margins)]
        self.last_readout = fuzzy_readout(scores, score_kind="margin")
        best = int(np.argmax(margins))
        return self.targets[best]
