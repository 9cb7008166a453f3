"""Hopfield associative memory: Hebbian storage and asynchronous recall.

Storage: w[i][j] = (1/D) sum_p p[i] p[j] for i != j, zero diagonal.
Energy:  E(s) = -1/2 sum_{i!=j} w[i][j] s[i] s[j].
Recall visits units in a seeded random permutation per sweep with
s[i] <- sign(sum_j w[i][j] s[j]), sign(0) keeping the current value, so
energy never increases across an accepted flip.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, UsageError
from .patterns import BipolarPattern


@dataclass(frozen=True)
class HopfieldNet:
    weights: np.ndarray
    dimension: int
    stored_count: int


def hopfield_store(patterns) -> HopfieldNet:
    """Hebbian outer-product storage over a non-empty pattern list."""
    patterns = list(patterns)
    if not patterns:
        raise UsageError("cannot store an empty pattern list")
    dim = patterns[0].dimension
    for p in patterns:
        if p.dimension != dim:
            raise DimensionError(f"mixed pattern dimensions: {p.dimension} vs {dim}")
    stack = np.stack([p.values for p in patterns]).astype(np.float64)
    weights = (stack.T @ stack) / dim
    np.fill_diagonal(weights, 0.0)
    weights.setflags(write=False)
    return HopfieldNet(weights=weights, dimension=dim, stored_count=len(patterns))


def hopfield_energy(net: HopfieldNet, state: BipolarPattern) -> float:
    if state.dimension != net.dimension:
        raise DimensionError(
            f"state dimension {state.dimension} does not match net dimension {net.dimension}"
        )
    s = state.values.astype(np.float64)
    return float(-0.5 * s @ (net.weights @ s))


def hopfield_recall(
    net: HopfieldNet,
    probe: BipolarPattern,
    max_sweeps: int = 20,
    rng_seed: int = 0,
    energy_trace: list | None = None,
) -> tuple[BipolarPattern, int]:
    """Asynchronous descent from a probe state.

    Stops at the first full sweep with no flips, or after ``max_sweeps``.
    If ``energy_trace`` is given, the post-flip energy is appended for every
    accepted flip (monotone non-increasing by construction).
    """
    if probe.dimension != net.dimension:
        raise DimensionError(
            f"probe dimension {probe.dimension} does not match net dimension {net.dimension}"
        )
    if max_sweeps < 1:
        raise UsageError("max_sweeps must be >= 1")
    rng = random.Random(rng_seed)
    state = probe.values.astype(np.float64).copy()
    weights = net.weights
    energy = float(-0.5 * state @ (weights @ state))
    order = list(range(net.dimension))
    for sweep in range(1, max_sweeps + 1):
        rng.shuffle(order)
        flips = 0
        for i in order:
            field = float(weights[i] @ state)
            if field > 0.0:
                new = 1.0
            elif field < 0.0:
                new = -1.0
            else:
                new = state[i]
            if new != state[i]:
                # Flipping against the sign of the field lowers E by 2|field|.
                energy += 2.0 * state[i] * field
                state[i] = new
                flips += 1
                if energy_trace is not None:
                    energy_trace.append(energy)
        if flips == 0:
            return BipolarPattern(state.astype(np.int8)), sweep
    return BipolarPattern(state.astype(np.int8)), max_sweeps
