"""Boltzmann machine translator: annealed settling and two-phase training.

Topology is visible_in + visible_out + hidden with symmetric weights, zero
diagonal, and no edges inside the visible_in layer. Stochastic dynamics use
Glauber flips: a uniformly chosen free unit flips with probability
1/(1 + exp(-dE/T)) where dE is the energy decrease of the flip, so a flip
with dE = 0 is accepted with probability exactly 0.5. Temperature follows a
geometric schedule.

Training: dw[i][j] = lr * (<s_i s_j>_clamped - <s_i s_j>_free), correlations
taken at equilibrium at t_final either by seeded sampling or by exact
enumeration of the free units (small machines), the latter existing so the
learning rule stays oracle-testable.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionError, DivergenceError, UsageError
from .patterns import BipolarPattern


@dataclass(frozen=True)
class AnnealSchedule:
    t_initial: float = 10.0
    decay: float = 0.9
    steps_per_temp: int = 100
    t_final: float = 0.1
    rng_seed: int = 0

    def __post_init__(self):
        if not (self.t_initial > self.t_final > 0.0):
            raise UsageError("need t_initial > t_final > 0")
        if not (0.0 < self.decay < 1.0):
            raise UsageError("decay must be in (0,1)")
        if self.steps_per_temp < 1:
            raise UsageError("steps_per_temp must be >= 1")

    def temperatures(self):
        t = self.t_initial
        while t >= self.t_final:
            yield t
            t *= self.decay


def default_schedule(free_units: int, rng_seed: int = 0) -> AnnealSchedule:
    """Stated defaults: start 10.0, decay 0.9, 50 steps per free unit, end 0.1."""
    return AnnealSchedule(
        t_initial=10.0,
        decay=0.9,
        steps_per_temp=50 * max(free_units, 1),
        t_final=0.1,
        rng_seed=rng_seed,
    )


@dataclass(frozen=True)
class BoltzmannMachine:
    n_in: int
    n_out: int
    n_hidden: int
    weights: np.ndarray
    biases: np.ndarray
    schedule: AnnealSchedule

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        b = np.asarray(self.biases, dtype=np.float64)
        u = self.units
        if w.shape != (u, u):
            raise DimensionError(f"weights must be {u}x{u}, got {w.shape}")
        if b.shape != (u,):
            raise DimensionError(f"biases must have length {u}, got {b.shape}")
        if not np.array_equal(w, w.T):
            raise UsageError("weights must be symmetric")
        if np.any(np.diag(w) != 0.0):
            raise UsageError("weight diagonal must be zero")
        if np.any(w[: self.n_in, : self.n_in] != 0.0):
            raise UsageError("visible_in units must not connect to each other")
        w.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "biases", b)

    @property
    def units(self) -> int:
        return self.n_in + self.n_out + self.n_hidden

    @property
    def free_units(self) -> int:
        return self.n_out + self.n_hidden

    @property
    def out_slice(self) -> slice:
        return slice(self.n_in, self.n_in + self.n_out)


def structural_mask(n_in: int, units: int) -> np.ndarray:
    mask = np.ones((units, units), dtype=np.float64)
    np.fill_diagonal(mask, 0.0)
    mask[:n_in, :n_in] = 0.0
    return mask


def initialized_machine(
    n_in: int,
    n_out: int,
    n_hidden: int = 0,
    weight_scale: float = 0.1,
    rng_seed: int = 0,
    schedule: AnnealSchedule | None = None,
) -> BoltzmannMachine:
    """Small random symmetric weights and biases honoring the topology mask."""
    units = n_in + n_out + n_hidden
    rng = np.random.default_rng(rng_seed)
    w = weight_scale * rng.standard_normal((units, units))
    w = (w + w.T) / 2.0
    w *= structural_mask(n_in, units)
    b = weight_scale * rng.standard_normal(units)
    if schedule is None:
        schedule = default_schedule(n_out + n_hidden, rng_seed)
    return BoltzmannMachine(n_in, n_out, n_hidden, w, b, schedule)


def boltzmann_energy(machine: BoltzmannMachine, state: np.ndarray) -> float:
    s = np.asarray(state, dtype=np.float64)
    return float(-0.5 * s @ (machine.weights @ s) - machine.biases @ s)


def _sigmoid(x: float) -> float:
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    ex = math.exp(x)
    return ex / (1.0 + ex)


def flip_probability(energy_decrease: float, temperature: float) -> float:
    """Glauber acceptance: 1/(1+exp(-dE/T)); exactly 0.5 at dE = 0."""
    return _sigmoid(energy_decrease / temperature)


def _anneal(
    machine: BoltzmannMachine,
    state: np.ndarray,
    free: np.ndarray,
    rng: random.Random,
    schedule: AnnealSchedule,
    track_best: bool,
):
    """Run the schedule in place; optionally return (best_energy, best_state copy)."""
    weights = machine.weights
    fields = weights @ state + machine.biases
    energy = boltzmann_energy(machine, state)
    best_energy = energy
    best_state = state.copy() if track_best else None
    n_free = free.shape[0]
    for temp in schedule.temperatures():
        for _ in range(schedule.steps_per_temp):
            i = free[rng.randrange(n_free)]
            decrease = -2.0 * state[i] * fields[i]
            accept = rng.random() < flip_probability(decrease, temp)
            if accept:
                old = state[i]
                state[i] = -old
                fields += (-2.0 * old) * weights[:, i]
                energy -= decrease
                if track_best and energy < best_energy:
                    best_energy = energy
                    best_state = state.copy()
    return best_energy, best_state, fields, energy


def boltzmann_settle(
    machine: BoltzmannMachine,
    clamped_in: BipolarPattern,
    schedule: AnnealSchedule,
) -> BipolarPattern:
    """Anneal with visible_in clamped; return visible_out of the best state seen.

    Hidden and visible_out start uniformly at random from the schedule seed;
    the per-step draw order (unit index, then acceptance uniform) is pinned,
    so identical seeds give identical outputs.
    """
    if clamped_in.dimension != machine.n_in:
        raise DimensionError(
            f"input dimension {clamped_in.dimension} does not match n_in {machine.n_in}"
        )
    rng = random.Random(schedule.rng_seed)
    state = np.empty(machine.units, dtype=np.float64)
    state[: machine.n_in] = clamped_in.values
    free = np.arange(machine.n_in, machine.units)
    for i in free:
        state[i] = 1.0 if rng.random() < 0.5 else -1.0
    _, best_state, _, _ = _anneal(machine, state, free, rng, schedule, track_best=True)
    out = best_state[machine.out_slice]
    return BipolarPattern(out.astype(np.int8))


@lru_cache(maxsize=8)
def _sign_grid(m: int) -> np.ndarray:
    """All +-1 assignments of m units, in binary-counter order."""
    grid = np.array(
        [[1.0 if (idx >> bit) & 1 else -1.0 for bit in range(m)] for idx in range(2**m)]
    )
    grid.setflags(write=False)
    return grid


def _exact_correlations(
    machine: BoltzmannMachine, state: np.ndarray, free: np.ndarray, temperature: float
) -> np.ndarray:
    """Exact <s_i s_j> at the given temperature with non-free units clamped.

    The clamped part contributes an effective bias, so only the free block
    is enumerated (2^m states).
    """
    m = free.shape[0]
    if m > 20:
        raise UsageError(f"exact enumeration limited to 20 free units, got {m}")
    units = machine.units
    clamped = np.setdiff1d(np.arange(units), free)
    if m == 0:
        return np.outer(state, state)
    w_ff = machine.weights[np.ix_(free, free)]
    h_eff = machine.weights[np.ix_(free, clamped)] @ state[clamped] + machine.biases[free]
    grid = _sign_grid(m)
    energies = -0.5 * np.einsum("ij,ij->i", grid @ w_ff, grid) - grid @ h_eff
    logits = -energies / temperature
    logits -= logits.max()
    probs = np.exp(logits)
    probs /= probs.sum()
    corr = np.outer(state, state)
    mean_free = probs @ grid
    corr_ff = (grid * probs[:, None]).T @ grid
    corr[np.ix_(free, free)] = corr_ff
    cross = np.outer(state[clamped], mean_free)
    corr[np.ix_(clamped, free)] = cross
    corr[np.ix_(free, clamped)] = cross.T
    return corr


def _sampled_correlations(
    machine: BoltzmannMachine,
    state: np.ndarray,
    free: np.ndarray,
    rng: random.Random,
    schedule: AnnealSchedule,
    samples: int,
    burn_in: int,
) -> np.ndarray:
    """Seeded equilibrium estimate of <s_i s_j> at t_final after annealing."""
    units = machine.units
    m = free.shape[0]
    if m == 0:
        return np.outer(state, state)
    _, _, fields, _ = _anneal(machine, state, free, rng, schedule, track_best=False)
    weights = machine.weights
    temp = schedule.t_final
    n_free = m
    sum_free = np.zeros(m)
    sum_outer = np.zeros((m, m))

    def step():
        i = free[rng.randrange(n_free)]
        decrease = -2.0 * state[i] * fields[i]
        if rng.random() < flip_probability(decrease, temp):
            old = state[i]
            state[i] = -old
            fields[:] += (-2.0 * old) * weights[:, i]

    for _ in range(burn_in):
        step()
    for _ in range(samples):
        step()
        sum_free += state[free]
        sum_outer += np.outer(state[free], state[free])

    clamped = np.setdiff1d(np.arange(units), free)
    corr = np.outer(state, state)
    corr[np.ix_(free, free)] = sum_outer / samples
    cross = np.outer(state[clamped], sum_free / samples)
    corr[np.ix_(clamped, free)] = cross
    corr[np.ix_(free, clamped)] = cross.T
    return corr


def phase_correlations(
    machine: BoltzmannMachine,
    clamp_values: dict[int, int],
    schedule: AnnealSchedule,
    rng: random.Random | None = None,
    method: str = "sampled",
    samples: int = 1000,
    burn_in: int | None = None,
) -> np.ndarray:
    """Equilibrium pair correlations with the given units clamped."""
    units = machine.units
    free = np.array([i for i in range(units) if i not in clamp_values], dtype=np.int64)
    state = np.zeros(units, dtype=np.float64)
    for i, v in clamp_values.items():
        state[i] = float(v)
    if method == "exact":
        for i in free:
            state[i] = 1.0
        return _exact_correlations(machine, state, free, schedule.t_final)
    if method != "sampled":
        raise UsageError(f"unknown correlation method {method!r}")
    if rng is None:
        rng = random.Random(schedule.rng_seed)
    for i in free:
        state[i] = 1.0 if rng.random() < 0.5 else -1.0
    if burn_in is None:
        burn_in = 50 * max(len(free), 1)
    return _sampled_correlations(machine, state, free, rng, schedule, samples, burn_in)


def boltzmann_train(
    machine: BoltzmannMachine,
    pairs,
    epochs: int,
    learning_rate: float,
    schedule: AnnealSchedule,
    correlation: str = "sampled",
    samples: int = 1000,
    burn_in: int | None = None,
) -> BoltzmannMachine:
    """Two-phase learning: clamped (both visible layers) minus free (input only).

    Weight symmetry, the zero diagonal, and the missing visible_in edges are
    preserved; biases are left untouched. A non-finite update raises
    :class:`DivergenceError`.
    """
    pairs = list(pairs)
    if not pairs:
        raise UsageError("training pairs must be non-empty")
    for x, y in pairs:
        if x.dimension != machine.n_in or y.dimension != machine.n_out:
            raise DimensionError("training pair dimensions do not match the machine")
    rng = random.Random(schedule.rng_seed)
    mask = structural_mask(machine.n_in, machine.units)
    weights = machine.weights.copy()
    out_lo = machine.n_in
    for _ in range(epochs):
        current = replace_weights(machine, weights)
        clamped_corr = np.zeros_like(weights)
        free_corr = np.zeros_like(weights)
        for x, y in pairs:
            clamp_plus = {i: int(v) for i, v in enumerate(x.values)}
            clamp_plus.update(
                {out_lo + i: int(v) for i, v in enumerate(y.values)}
            )
            clamp_minus = {i: int(v) for i, v in enumerate(x.values)}
            clamped_corr += phase_correlations(
                current, clamp_plus, schedule, rng, correlation, samples, burn_in
            )
            free_corr += phase_correlations(
                current, clamp_minus, schedule, rng, correlation, samples, burn_in
            )
        with np.errstate(invalid="ignore", over="ignore"):
            delta = learning_rate * (clamped_corr - free_corr) / len(pairs)
        if not np.all(np.isfinite(delta)):
            raise DivergenceError("non-finite weight update")
        weights += delta
        weights *= mask
        weights = (weights + weights.T) / 2.0
    return replace_weights(machine, weights)


def replace_weights(machine: BoltzmannMachine, weights: np.ndarray) -> BoltzmannMachine:
    return BoltzmannMachine(
        n_in=machine.n_in,
        n_out=machine.n_out,
        n_hidden=machine.n_hidden,
        weights=weights.copy(),
        biases=machine.biases.copy(),
        schedule=machine.schedule,
    )
