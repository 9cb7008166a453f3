"""Decoder-vs-enumeration equivalence on random small instances.

The heavyweight 200-instance sweep lives in the acceptance module; this is
the fast everyday version plus a couple of structured corner cases.
"""

from __future__ import annotations

import random

import pytest

from autotrain.errors import NoParseError
from autotrain.ngram import DecoderConfig, decode_phonemes, train_ngram
from autotrain.phonemes import INVENTORY, NoiseSpec, apply_noise, text_to_phonemes

from .conftest import make_lexicon
from .oracles import oracle_decode


def random_instance(rng: random.Random):
    n_words = rng.randint(3, 6)
    entries: dict[str, tuple[str, ...]] = {}
    seen = set()
    while len(entries) < n_words:
        word = "".join(rng.choice("abcdefgh") for _ in range(rng.randint(3, 5)))
        pron = tuple(rng.choice(INVENTORY) for _ in range(rng.randint(3, 5)))
        if word in entries or pron in seen:
            continue
        entries[word] = pron
        seen.add(pron)
    lexicon = make_lexicon(entries)
    words = list(entries)
    utterances = [
        text_to_phonemes(" ".join(rng.choice(words) for _ in range(rng.randint(1, 2))), lexicon)
        for _ in range(4)
    ]
    model = train_ngram(utterances, order=rng.choice([1, 2, 3]), smoothing=rng.choice([0.0, 1.0]))
    clean = utterances[rng.randrange(len(utterances))]
    noisy = apply_noise(
        clean,
        NoiseSpec(
            substitute_prob=rng.choice([0.0, 0.2]),
            delete_prob=rng.choice([0.0, 0.1]),
            insert_prob=rng.choice([0.0, 0.1]),
            rng_seed=rng.randrange(10**6),
        ),
    )
    return lexicon, model, noisy


def check_against_oracle(lexicon, model, observed, k_best=3):
    config = DecoderConfig(edit_penalty=4.0, max_edits=2)
    expected = oracle_decode(observed, lexicon, model, k_best, config)
    try:
        got = decode_phonemes(observed, lexicon, model, k_best=k_best, config=config)
    except NoParseError:
        assert expected is None
        return
    assert expected is not None
    assert got.words == expected[0][0]
    assert got.score == pytest.approx(expected[0][1], abs=1e-9)
    got_words = [w for w, _ in got.alternates]
    want_words = [w for w, _ in expected[: len(got_words)]]
    assert got_words == want_words


def test_matches_enumeration_on_random_instances():
    rng = random.Random(4242)
    checked = 0
    while checked < 40:
        lexicon, model, observed = random_instance(rng)
        if len(observed) > 10:
            continue
        check_against_oracle(lexicon, model, observed)
        checked += 1


def test_duplicate_pronunciations_tie_break_on_words():
    lexicon = make_lexicon({"ant": ("AE", "N", "T"), "bee": ("AE", "N", "T")})
    model = train_ngram([["AE", "N", "T"]], order=2, smoothing=1.0)
    observed = text_to_phonemes("ant", lexicon)
    check_against_oracle(lexicon, model, observed, k_best=2)
    result = decode_phonemes(observed, lexicon, model, k_best=2)
    assert result.words == ("ant",)  # equal scores; lexicographic winner
    assert [w for w, _ in result.alternates] == [("ant",), ("bee",)]


def test_short_input_allows_empty_candidate():
    lexicon = make_lexicon({"calm": ("K", "AA", "M")})
    model = train_ngram([["K", "AA", "M"]], order=1, smoothing=1.0)
    from autotrain.phonemes import PhonemeSequence

    observed = PhonemeSequence(("OY",))
    check_against_oracle(lexicon, model, observed, k_best=3)
