"""Deterministic text-to-phoneme channel: inventory, lexicon, and seeded noise.

The speech front-end is simulated: utterance text is looked up in a
pronunciation lexicon and rendered as a phoneme sequence, and a seeded
noise channel can corrupt that sequence for decoder testing.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import InventoryError, OOVError, ParseError, UsageError

# 39-symbol ARPAbet-style inventory (stress-free CMU set).
INVENTORY: tuple[str, ...] = (
    "AA", "AE", "AH", "AO", "AW", "AY", "B", "CH", "D", "DH",
    "EH", "ER", "EY", "F", "G", "HH", "IH", "IY", "JH", "K",
    "L", "M", "N", "NG", "OW", "OY", "P", "R", "S", "SH",
    "T", "TH", "UH", "UW", "V", "W", "Y", "Z", "ZH",
)
_INVENTORY_SET = frozenset(INVENTORY)

#: Word-boundary marker allowed between words inside a sequence.
BOUNDARY = "|"


@dataclass(frozen=True)
class Phoneme:
    """A single inventory symbol; construction rejects anything else."""

    symbol: str

    def __post_init__(self):
        if self.symbol not in _INVENTORY_SET:
            raise InventoryError(self.symbol)

    def __str__(self) -> str:
        return self.symbol


@dataclass(frozen=True)
class PhonemeSequence:
    """Ordered phoneme symbols with optional word-boundary markers.

    Adjacent boundary markers are rejected; use :meth:`normalized` for
    inputs that may need boundary cleanup (e.g. after deletions).
    """

    symbols: tuple[str, ...] = ()

    def __post_init__(self):
        prev = None
        for sym in self.symbols:
            if sym != BOUNDARY and sym not in _INVENTORY_SET:
                raise InventoryError(sym)
            if sym == BOUNDARY and prev == BOUNDARY:
                raise UsageError("adjacent boundary markers are not allowed")
            prev = sym

    @classmethod
    def normalized(cls, symbols) -> "PhonemeSequence":
        """Build a sequence, collapsing boundary runs and stripping edge boundaries."""
        out: list[str] = []
        for sym in symbols:
            if sym == BOUNDARY and (not out or out[-1] == BOUNDARY):
                continue
            out.append(sym)
        while out and out[-1] == BOUNDARY:
            out.pop()
        return cls(tuple(out))

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __str__(self) -> str:
        return " ".join(self.symbols)

    @property
    def phonemes(self) -> tuple[Phoneme, ...]:
        return tuple(Phoneme(s) for s in self.symbols if s != BOUNDARY)

    def without_boundaries(self) -> "PhonemeSequence":
        return PhonemeSequence(tuple(s for s in self.symbols if s != BOUNDARY))


@dataclass(frozen=True)
class Pronunciation:
    symbols: tuple[str, ...]
    weight: float


@dataclass(frozen=True)
class Lexicon:
    """Word -> weighted pronunciations. Weights for a word sum to 1."""

    entries: dict[str, tuple[Pronunciation, ...]]

    def __post_init__(self):
        for word, prons in self.entries.items():
            if not prons:
                raise UsageError(f"word {word!r} has no pronunciations")
            total = 0.0
            for pron in prons:
                if not pron.symbols:
                    raise UsageError(f"word {word!r} has an empty pronunciation")
                for sym in pron.symbols:
                    if sym not in _INVENTORY_SET:
                        raise InventoryError(sym)
                if not (0.0 < pron.weight <= 1.0):
                    raise UsageError(f"word {word!r} has weight {pron.weight} outside (0,1]")
                total += pron.weight
            if abs(total - 1.0) > 1e-9:
                raise UsageError(f"weights for word {word!r} sum to {total}, not 1")

    def __contains__(self, word: str) -> bool:
        return word in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def words(self) -> tuple[str, ...]:
        return tuple(sorted(self.entries))

    def pronunciations(self, word: str) -> tuple[Pronunciation, ...]:
        if word not in self.entries:
            raise OOVError(word)
        return self.entries[word]

    def best_pronunciation(self, word: str) -> Pronunciation:
        """Highest-weight pronunciation; weight ties break lexicographically."""
        prons = self.pronunciations(word)
        return min(prons, key=lambda p: (-p.weight, " ".join(p.symbols)))


@dataclass(frozen=True)
class NoiseSpec:
    """Per-phoneme corruption probabilities plus the generator seed."""

    substitute_prob: float = 0.0
    delete_prob: float = 0.0
    insert_prob: float = 0.0
    rng_seed: int = 0

    def __post_init__(self):
        for name in ("substitute_prob", "delete_prob", "insert_prob"):
            p = getattr(self, name)
            if not (0.0 <= p <= 1.0):
                raise UsageError(f"{name} must be in [0,1], got {p}")
        if self.substitute_prob + self.delete_prob > 1.0:
            raise UsageError("substitute_prob + delete_prob must not exceed 1")


def load_lexicon(source: str) -> Lexicon:
    """Parse lexicon file content: ``word PH1 ... PHn [weight]`` per line.

    ``#`` starts a comment line. Explicit weights are normalized per word;
    words without weights get an equal split. Duplicate (word, pronunciation)
    lines are an error.
    """
    raw: dict[str, list[tuple[tuple[str, ...], float | None]]] = {}
    weight_lines: dict[str, int] = {}
    for lineno, line in enumerate(source.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = stripped.split()
        if len(tokens) < 2:
            raise ParseError("expected `word PH1 ... [weight]`", line=lineno)
        word = tokens[0].lower()
        weight: float | None = None
        phoneme_tokens = tokens[1:]
        try:
            weight = float(tokens[-1])
            phoneme_tokens = tokens[1:-1]
        except ValueError:
            pass
        if not phoneme_tokens:
            raise ParseError(f"word {word!r} has no phonemes", line=lineno)
        if weight is not None and weight <= 0.0:
            raise ParseError(f"weight must be positive, got {weight}", line=lineno)
        symbols = []
        for tok in phoneme_tokens:
            sym = tok.upper()
            if sym not in _INVENTORY_SET:
                raise InventoryError(sym)
            symbols.append(sym)
        pron = tuple(symbols)
        existing = raw.setdefault(word, [])
        if any(p == pron for p, _ in existing):
            raise ParseError(f"duplicate pronunciation for word {word!r}", line=lineno)
        existing.append((pron, weight))
        weight_lines[word] = lineno

    entries: dict[str, tuple[Pronunciation, ...]] = {}
    for word, prons in raw.items():
        weights = [w for _, w in prons]
        if all(w is None for w in weights):
            share = 1.0 / len(prons)
            entries[word] = tuple(Pronunciation(p, share) for p, _ in prons)
        elif all(w is not None for w in weights):
            total = sum(weights)
            entries[word] = tuple(Pronunciation(p, w / total) for p, w in prons)
        else:
            raise ParseError(
                f"word {word!r} mixes weighted and unweighted pronunciations",
                line=weight_lines[word],
            )
    return Lexicon(entries)


def text_to_phonemes(text: str, lexicon: Lexicon) -> PhonemeSequence:
    """Render whitespace-tokenized text as phonemes with boundaries between words.

    Each token uses its highest-weight pronunciation (ties lexicographic).
    Unknown tokens raise :class:`OOVError`.
    """
    symbols: list[str] = []
    for token in text.split():
        word = token.lower()
        if word not in lexicon:
            raise OOVError(token)
        if symbols:
            symbols.append(BOUNDARY)
        symbols.extend(lexicon.best_pronunciation(word).symbols)
    return PhonemeSequence(tuple(symbols))


def apply_noise(seq: PhonemeSequence, spec: NoiseSpec) -> PhonemeSequence:
    """Corrupt a sequence with seeded per-phoneme substitution/deletion/insertion.

    Draw order per input phoneme is pinned for determinism: one uniform for
    the substitute/delete event, then one for insertion (drawn even when the
    phoneme was deleted). Boundary markers pass through untouched and are
    re-normalized at the end so deletions cannot leave adjacent boundaries.
    """
    rng = random.Random(spec.rng_seed)
    out: list[str] = []
    for sym in seq:
        if sym == BOUNDARY:
            out.append(sym)
            continue
        u = rng.random()
        if u < spec.substitute_prob:
            others = tuple(p for p in INVENTORY if p != sym)
            out.append(others[rng.randrange(len(others))])
        elif u < spec.substitute_prob + spec.delete_prob:
            pass
        else:
            out.append(sym)
        if rng.random() < spec.insert_prob:
            out.append(INVENTORY[rng.randrange(len(INVENTORY))])
    return PhonemeSequence.normalized(out)
