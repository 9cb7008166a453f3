"""Bipolar {-1,+1} pattern encoding shared by all associative backends.

A phoneme sequence is encoded slot-by-slot as a one-hot over the encoding
alphabet (inventory + boundary + pad) mapped to bipolar values: +1 at the
active index, -1 elsewhere. Unused trailing slots are pad-coded, so the
mapping is injective for sequences up to the slot limit and exactly
invertible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DimensionError, UsageError
from .phonemes import BOUNDARY, INVENTORY, PhonemeSequence

PAD = "_"
ENCODING_ALPHABET: tuple[str, ...] = INVENTORY + (BOUNDARY, PAD)
_INDEX = {sym: i for i, sym in enumerate(ENCODING_ALPHABET)}
SLOT_WIDTH = len(ENCODING_ALPHABET)


def pattern_dimension(slots: int) -> int:
    return slots * SLOT_WIDTH


@dataclass(frozen=True)
class BipolarPattern:
    """Fixed-length vector with entries in {-1, +1}."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.int8)
        if arr.ndim != 1:
            raise UsageError("pattern values must be one-dimensional")
        if not np.all(np.abs(arr) == 1):
            raise UsageError("pattern entries must be exactly -1 or +1")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def dimension(self) -> int:
        return int(self.values.shape[0])

    def __eq__(self, other) -> bool:
        if not isinstance(other, BipolarPattern):
            return NotImplemented
        return self.values.shape == other.values.shape and bool(
            np.array_equal(self.values, other.values)
        )

    def __hash__(self) -> int:
        return hash(self.values.tobytes())

    def complement(self) -> "BipolarPattern":
        return BipolarPattern(-self.values)

    def to_list(self) -> list[int]:
        return [int(v) for v in self.values]


def agreement(a: BipolarPattern, b: BipolarPattern) -> float:
    """Fraction of matching coordinates, in [0, 1]."""
    if a.dimension != b.dimension:
        raise DimensionError(f"pattern dimensions differ: {a.dimension} vs {b.dimension}")
    dot = int(np.dot(a.values.astype(np.int64), b.values.astype(np.int64)))
    return (a.dimension + dot) / (2 * a.dimension)


def encode_pattern(seq: PhonemeSequence, dimension: int) -> BipolarPattern:
    """One-hot-per-slot bipolar encoding of a sequence (boundaries included)."""
    if dimension % SLOT_WIDTH != 0:
        raise UsageError(
            f"dimension must be a multiple of the alphabet width {SLOT_WIDTH}"
        )
    slots = dimension // SLOT_WIDTH
    symbols = tuple(seq)
    if len(symbols) > slots:
        raise CapacityError(
            f"sequence of length {len(symbols)} exceeds {slots} slots"
        )
    values = np.full(dimension, -1, dtype=np.int8)
    for slot in range(slots):
        sym = symbols[slot] if slot < len(symbols) else PAD
        values[slot * SLOT_WIDTH + _INDEX[sym]] = 1
    return BipolarPattern(values)


def decode_pattern(pattern: BipolarPattern) -> PhonemeSequence:
    """Exact inverse of :func:`encode_pattern`; rejects non-encodings."""
    if pattern.dimension % SLOT_WIDTH != 0:
        raise UsageError("pattern dimension is not a whole number of slots")
    slots = pattern.dimension // SLOT_WIDTH
    symbols: list[str] = []
    seen_pad = False
    for slot in range(slots):
        block = pattern.values[slot * SLOT_WIDTH : (slot + 1) * SLOT_WIDTH]
        hot = np.flatnonzero(block == 1)
        if hot.shape[0] != 1:
            raise UsageError(f"slot {slot} is not one-hot")
        sym = ENCODING_ALPHABET[int(hot[0])]
        if sym == PAD:
            seen_pad = True
            continue
        if seen_pad:
            raise UsageError("pad slots must be trailing")
        symbols.append(sym)
    return PhonemeSequence(tuple(symbols))


def nearest_sequence(pattern: BipolarPattern) -> PhonemeSequence:
    """Best-effort slot-wise readout for states that are not exact encodings.

    Per slot the first maximal coordinate wins; reading stops at the first
    pad slot and boundary runs are normalized.
    """
    if pattern.dimension % SLOT_WIDTH != 0:
        raise UsageError("pattern dimension is not a whole number of slots")
    slots = pattern.dimension // SLOT_WIDTH
    symbols: list[str] = []
    for slot in range(slots):
        block = pattern.values[slot * SLOT_WIDTH : (slot + 1) * SLOT_WIDTH]
        sym = ENCODING_ALPHABET[int(np.argmax(block))]
        if sym == PAD:
            break
        symbols.append(sym)
    return PhonemeSequence.normalized(symbols)
