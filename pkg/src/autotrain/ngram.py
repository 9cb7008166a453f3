"""N-gram models over phoneme/morpheme symbols: training, pruning, decoding.

Training is maximum likelihood with add-k smoothing; pruning drops entries
below a probability threshold without renormalizing (queries fall back to a
documented floor). Decoding searches segmentations of a noisy phoneme
sequence into lexicon pronunciations under a per-symbol edit model, scoring
each candidate as model log-probability minus an edit penalty.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import NoParseError, TrainingError, UsageError, VocabularyError
from .phonemes import BOUNDARY, Lexicon, PhonemeSequence

START = "<s>"
END = "</s>"

#: Probability floor returned for pruned/absent events when smoothing_k == 0.
UNSMOOTHED_FLOOR = 1e-10


@dataclass(frozen=True)
class NGramModel:
    """Conditional next-symbol tables keyed by (order-1)-symbol contexts.

    ``tables`` maps context tuples to {symbol: probability}; ``context_counts``
    keeps the raw event totals per context so the smoothed backoff floor stays
    computable after pruning and after a save/load round trip.
    """

    order: int
    smoothing_k: float
    vocab: tuple[str, ...]
    tables: dict[tuple[str, ...], dict[str, float]]
    context_counts: dict[tuple[str, ...], int]

    @property
    def vocab_set(self) -> frozenset:
        return frozenset(self.vocab)


@dataclass(frozen=True)
class PruneConfig:
    threshold: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.threshold <= 1.0):
            raise UsageError(f"prune threshold must be in [0,1], got {self.threshold}")


@dataclass(frozen=True)
class DecoderConfig:
    """Edit-model constants; penalties are config, not part of the method."""

    edit_penalty: float = 4.0
    max_edits: int = 2

    def __post_init__(self):
        if self.edit_penalty < 0:
            raise UsageError("edit_penalty must be non-negative")
        if self.max_edits < 0:
            raise UsageError("max_edits must be non-negative")


@dataclass(frozen=True)
class DecodeResult:
    words: tuple[str, ...]
    score: float
    alternates: tuple[tuple[tuple[str, ...], float], ...]

    def __post_init__(self):
        if not self.alternates:
            raise UsageError("alternates must hold at least the best candidate")
        head_words, head_score = self.alternates[0]
        if head_words != self.words or head_score != self.score:
            raise UsageError("head alternate must equal (words, score)")
        scores = [s for _, s in self.alternates]
        if any(a < b for a, b in zip(scores, scores[1:])):
            raise UsageError("alternates must be sorted by descending score")


def train_ngram(corpus, order: int, smoothing: float = 0.0) -> NGramModel:
    """Count-based training with add-k smoothing.

    Sequences are padded with ``order - 1`` start markers and one end marker.
    The vocabulary is every observed symbol plus the end marker (start markers
    appear only inside contexts). With k > 0 each seen context stores the full
    smoothed distribution over the vocabulary.
    """
    if order < 1:
        raise UsageError(f"order must be >= 1, got {order}")
    if smoothing < 0:
        raise UsageError(f"smoothing k must be >= 0, got {smoothing}")
    corpus = list(corpus)
    if not corpus:
        raise TrainingError("corpus is empty")

    counts: dict[tuple[str, ...], dict[str, int]] = {}
    totals: dict[tuple[str, ...], int] = {}
    seen: set[str] = set()
    for seq in corpus:
        symbols = list(seq)
        seen.update(symbols)
        padded = [START] * (order - 1) + symbols + [END]
        for i in range(order - 1, len(padded)):
            ctx = tuple(padded[i - order + 1 : i])
            sym = padded[i]
            bucket = counts.setdefault(ctx, {})
            bucket[sym] = bucket.get(sym, 0) + 1
            totals[ctx] = totals.get(ctx, 0) + 1

    vocab = tuple(sorted(seen | {END}))
    k = float(smoothing)
    tables: dict[tuple[str, ...], dict[str, float]] = {}
    for ctx, bucket in counts.items():
        total = totals[ctx]
        if k > 0:
            denom = total + k * len(vocab)
            tables[ctx] = {sym: (bucket.get(sym, 0) + k) / denom for sym in vocab}
        else:
            tables[ctx] = {sym: cnt / total for sym, cnt in bucket.items()}
    return NGramModel(order=order, smoothing_k=k, vocab=vocab, tables=tables, context_counts=totals)


def prune_ngrams(model: NGramModel, config: PruneConfig) -> NGramModel:
    """Drop entries with probability < threshold; no renormalization.

    Idempotent at a fixed threshold; emptied contexts are removed from the
    tables while their event counts stay available for backoff floors.
    """
    tables: dict[tuple[str, ...], dict[str, float]] = {}
    for ctx, dist in model.tables.items():
        kept = {sym: p for sym, p in dist.items() if p >= config.threshold}
        if kept:
            tables[ctx] = kept
    return NGramModel(
        order=model.order,
        smoothing_k=model.smoothing_k,
        vocab=model.vocab,
        tables=tables,
        context_counts=dict(model.context_counts),
    )


def _floor_prob(model: NGramModel, context: tuple[str, ...]) -> float:
    if model.smoothing_k > 0:
        total = model.context_counts.get(context, 0)
        return model.smoothing_k / (total + model.smoothing_k * len(model.vocab))
    return UNSMOOTHED_FLOOR


def lookup_prob(model: NGramModel, context, next_symbol: str) -> float:
    """Stored probability, or the backoff floor for pruned/absent events."""
    ctx = tuple(context)
    if len(ctx) != model.order - 1:
        raise UsageError(
            f"context length must be {model.order - 1}, got {len(ctx)}"
        )
    if next_symbol not in model.vocab_set:
        raise VocabularyError(f"symbol {next_symbol!r} is not in the model vocabulary")
    stored = model.tables.get(ctx, {}).get(next_symbol)
    if stored is not None:
        return stored
    return _floor_prob(model, ctx)


def _score_symbol(model: NGramModel, context: tuple[str, ...], symbol: str) -> float:
    """Log score used by the decoder; unseen symbols fall to the floor instead of erroring."""
    stored = model.tables.get(context, {}).get(symbol)
    if stored is None:
        stored = _floor_prob(model, context)
    return math.log(stored)


def sequence_logprob(model: NGramModel, symbols) -> float:
    """Log-probability of a full sequence including the end transition."""
    n1 = model.order - 1
    ctx = (START,) * n1
    total = 0.0
    for sym in list(symbols) + [END]:
        total += _score_symbol(model, ctx, sym)
        if n1:
            ctx = (ctx + (sym,))[-n1:]
    return total


_BORDER = ("<border>", -1)


def decode_phonemes(
    seq: PhonemeSequence,
    lexicon: Lexicon,
    model: NGramModel,
    k_best: int = 1,
    config: DecoderConfig | None = None,
) -> DecodeResult:
    """Best word sequences for a (possibly noisy) phoneme sequence.

    Candidates are segmentations into lexicon pronunciations joined by
    boundary markers; the observed sequence is aligned to each candidate
    realization with at most ``max_edits`` per-symbol edits. Score =
    sequence log-probability - edit_penalty * edits. Ties break on the
    space-joined word string. Exact: equals exhaustive enumeration.
    """
    if k_best < 1:
        raise UsageError("k_best must be >= 1")
    if len(lexicon) == 0:
        raise UsageError("lexicon must be non-empty")
    config = config or DecoderConfig()
    obs = tuple(seq)
    if not obs:
        return DecodeResult(words=(), score=0.0, alternates=(((), 0.0),))

    units: list[tuple[str, tuple[str, ...]]] = []
    for word in lexicon.words:
        for pron in lexicon.pronunciations(word):
            units.append((word, pron.symbols))

    n1 = model.order - 1
    ctx0 = (START,) * n1
    penalty = config.edit_penalty
    max_edits = config.max_edits
    length = len(obs)
    keep = max(k_best, 4)

    def roll(ctx: tuple[str, ...], sym: str) -> tuple[str, ...]:
        return (ctx + (sym,))[-n1:] if n1 else ctx

    def prune(cands: dict) -> list:
        ranked = sorted(cands.items(), key=lambda kv: (-kv[1], " ".join(kv[0])))
        return ranked[:keep]

    # State: (i consumed, edits, node, ctx); node is _BORDER or (unit, pos).
    # Every edge raises i + edits by one except zero-cost word entry, so the
    # lattice is processed level by level on i + edits.
    levels: list[dict] = [dict() for _ in range(length + max_edits + 2)]
    levels[0][(0, 0, _BORDER, ctx0)] = {(): 0.0}
    finals: dict[tuple[str, ...], float] = {}

    def add(level: int, state: tuple, words: tuple[str, ...], score: float):
        bucket = levels[level].setdefault(state, {})
        cur = bucket.get(words)
        if cur is None or score > cur:
            bucket[words] = score

    def add_final(words: tuple[str, ...], score: float):
        cur = finals.get(words)
        if cur is None or score > cur:
            finals[words] = score

    for lvl in range(length + max_edits + 1):
        bucket = levels[lvl]
        # Word entry: border states fan out to pronunciation starts in-level.
        for state in list(bucket.keys()):
            i, e, node, ctx = state
            if node is not _BORDER:
                continue
            for cand_words, score in prune(bucket[state]):
                for u, (word, _pron) in enumerate(units):
                    add(lvl, (i, e, (u, 0), ctx), cand_words + (word,), score)

        for state, cands in bucket.items():
            i, e, node, ctx = state
            ranked = prune(cands)
            if node is _BORDER:
                if i == length:
                    for words, score in ranked:
                        if not words:  # empty segmentation from the initial border
                            add_final(words, score + _score_symbol(model, ctx, END))
                if i < length and e < max_edits:
                    for words, score in ranked:
                        add(lvl + 1, (i + 1, e + 1, _BORDER, ctx), words, score - penalty)
                continue

            u, j = node
            word, pron = units[u]
            if j == len(pron):
                # Completed word: finish here, delete, or emit a boundary.
                if i == length:
                    end_cost = _score_symbol(model, ctx, END)
                    for words, score in ranked:
                        add_final(words, score + end_cost)
                if i < length and e < max_edits:
                    for words, score in ranked:
                        add(lvl + 1, (i + 1, e + 1, node, ctx), words, score - penalty)
                cost = _score_symbol(model, ctx, BOUNDARY)
                nctx = roll(ctx, BOUNDARY)
                for words, score in ranked:
                    if i < length and obs[i] == BOUNDARY:
                        add(lvl + 1, (i + 1, e, _BORDER, nctx), words, score + cost)
                    if i < length and obs[i] != BOUNDARY and e < max_edits:
                        add(lvl + 1, (i + 1, e + 1, _BORDER, nctx), words, score + cost - penalty)
                    if e < max_edits:
                        add(lvl + 1, (i, e + 1, _BORDER, nctx), words, score + cost - penalty)
                continue

            sym = pron[j]
            cost = _score_symbol(model, ctx, sym)
            nctx = roll(ctx, sym)
            nnode = (u, j + 1)
            for words, score in ranked:
                if i < length and obs[i] == sym:
                    add(lvl + 1, (i + 1, e, nnode, nctx), words, score + cost)
                if i < length and obs[i] != sym and e < max_edits:
                    add(lvl + 1, (i + 1, e + 1, nnode, nctx), words, score + cost - penalty)
                if e < max_edits:
                    add(lvl + 1, (i, e + 1, nnode, nctx), words, score + cost - penalty)
                if i < length and e < max_edits:
                    add(lvl + 1, (i + 1, e + 1, node, ctx), words, score - penalty)

    if not finals:
        raise NoParseError(
            f"no segmentation within {max_edits} edits for: {' '.join(obs)}"
        )
    ordered = sorted(finals.items(), key=lambda kv: (-kv[1], " ".join(kv[0])))[:k_best]
    best_words, best_score = ordered[0]
    return DecodeResult(words=best_words, score=best_score, alternates=tuple(ordered))


def morpheme_chunks(lexicon: Lexicon):
    """Segmentation units: full pronunciations plus their prefixes of length >= 2.

    Yields (word, chunk symbols, is_complete) with complete pronunciations
    first per word.
    """
    for word in lexicon.words:
        for pron in lexicon.pronunciations(word):
            yield word, pron.symbols, True
            for cut in range(len(pron.symbols) - 1, 1, -1):
                yield word, pron.symbols[:cut], False


def suggest_completions(seq: PhonemeSequence, lexicon: Lexicon, limit: int = 3) -> tuple[str, ...]:
    """Words whose pronunciation chunks prefix-match a clipped phoneme stream.

    Used by callers that need a clarification hint when decoding fails;
    ranked by matched chunk length (longest first), then alphabetically.
    """
    observed = tuple(s for s in seq if s != BOUNDARY)
    if not observed:
        return ()
    scored: dict[str, int] = {}
    for word, chunk, _complete in morpheme_chunks(lexicon):
        if observed[: len(chunk)] == chunk:
            scored[word] = max(scored.get(word, 0), len(chunk))
    ranked = sorted(scored.items(), key=lambda kv: (-kv[1], kv[0]))
    return tuple(word for word, _ in ranked[:limit])


def model_to_json(model: NGramModel) -> str:
    """Canonical JSON rendering; save -> load -> save is byte-identical."""
    entries = []
    for ctx in sorted(model.tables):
        for sym in sorted(model.tables[ctx]):
            entries.append(list(ctx) + [sym, model.tables[ctx][sym]])
    counts = [list(ctx) + [n] for ctx, n in sorted(model.context_counts.items())]
    doc = {
        "order": model.order,
        "smoothing_k": model.smoothing_k,
        "vocab": list(model.vocab),
        "entries": entries,
        "context_counts": counts,
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def model_from_json(text: str) -> NGramModel:
    doc = json.loads(text)
    order = int(doc["order"])
    n1 = order - 1
    tables: dict[tuple[str, ...], dict[str, float]] = {}
    for entry in doc["entries"]:
        ctx = tuple(entry[:n1])
        sym = entry[n1]
        prob = float(entry[n1 + 1])
        tables.setdefault(ctx, {})[sym] = prob
    counts = {tuple(row[:n1]): int(row[n1]) for row in doc["context_counts"]}
    return NGramModel(
        order=order,
        smoothing_k=float(doc["smoothing_k"]),
        vocab=tuple(doc["vocab"]),
        tables=tables,
        context_counts=counts,
    )


def save_model(model: NGramModel, path) -> None:
    Path(path).write_text(model_to_json(model), encoding="utf-8")


def load_model(path) -> NGramModel:
    return model_from_json(Path(path).read_text(encoding="utf-8"))
