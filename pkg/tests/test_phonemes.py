from __future__ import annotations

import random

import pytest

from autotrain.errors import InventoryError, OOVError, ParseError, UsageError
from autotrain.phonemes import (
    BOUNDARY,
    INVENTORY,
    NoiseSpec,
    Phoneme,
    PhonemeSequence,
    apply_noise,
    load_lexicon,
    text_to_phonemes,
)


def random_sequence(rng: random.Random, max_len: int = 12) -> PhonemeSequence:
    out = []
    for _ in range(rng.randint(0, max_len)):
        if out and out[-1] != BOUNDARY and rng.random() < 0.15:
            out.append(BOUNDARY)
        else:
            out.append(rng.choice(INVENTORY))
    return PhonemeSequence.normalized(out)


class TestPhoneme:
    def test_inventory_has_39_symbols(self):
        assert len(INVENTORY) == 39
        assert len(set(INVENTORY)) == 39

    def test_valid_symbol(self):
        assert Phoneme("AA").symbol == "AA"

    def test_rejects_unknown_symbol(self):
        with pytest.raises(InventoryError):
            Phoneme("ZZ")


class TestPhonemeSequence:
    def test_rejects_adjacent_boundaries(self):
        with pytest.raises(UsageError):
            PhonemeSequence(("K", BOUNDARY, BOUNDARY, "M"))

    def test_normalized_collapses_and_strips(self):
        seq = PhonemeSequence.normalized([BOUNDARY, "K", BOUNDARY, BOUNDARY, "M", BOUNDARY])
        assert tuple(seq) == ("K", BOUNDARY, "M")

    def test_rejects_unknown_symbol(self):
        with pytest.raises(InventoryError):
            PhonemeSequence(("K", "QQ"))


class TestLoadLexicon:
    def test_single_entry_reads_back(self):
        lex = load_lexicon("relax R IH L AE K S 1.0\n")
        assert lex.words == ("relax",)
        pron = lex.best_pronunciation("relax")
        assert pron.symbols == ("R", "IH", "L", "AE", "K", "S")
        assert pron.weight == 1.0

    def test_empty_file_gives_empty_lexicon(self):
        assert len(load_lexicon("")) == 0

    def test_unknown_phoneme_names_symbol(self):
        with pytest.raises(InventoryError) as err:
            load_lexicon("calm K AA ZZ 1.0\n")
        assert err.value.symbol == "ZZ"

    def test_malformed_line_reports_line_number(self):
        with pytest.raises(ParseError) as err:
            load_lexicon("calm K AA M\nrelax\n")
        assert err.value.line == 2

    def test_duplicate_pronunciation_is_error(self):
        with pytest.raises(ParseError):
            load_lexicon("calm K AA M\ncalm K AA M\n")

    def test_comments_and_blank_lines_skip(self):
        lex = load_lexicon("# header\n\ncalm K AA M\n")
        assert lex.words == ("calm",)

    def test_default_weights_split_equally(self):
        lex = load_lexicon("calm K AA M\ncalm K AA L M\n")
        weights = sorted(p.weight for p in lex.pronunciations("calm"))
        assert weights == [0.5, 0.5]

    def test_explicit_weights_normalize(self):
        lex = load_lexicon("calm K AA M 3.0\ncalm K AA L M 1.0\n")
        by_len = {len(p.symbols): p.weight for p in lex.pronunciations("calm")}
        assert by_len[3] == pytest.approx(0.75)
        assert by_len[4] == pytest.approx(0.25)

    def test_mixed_weighting_is_error(self):
        with pytest.raises(ParseError):
            load_lexicon("calm K AA M 0.5\ncalm K AA L M\n")


class TestTextToPhonemes:
    def test_single_word_matches_lexicon(self, small_lexicon):
        seq = text_to_phonemes("relax", small_lexicon)
        assert tuple(seq) == ("R", "IH", "L", "AE", "K", "S")

    def test_empty_text_gives_empty_sequence(self, small_lexicon):
        assert len(text_to_phonemes("", small_lexicon)) == 0

    def test_oov_names_token(self, small_lexicon):
        with pytest.raises(OOVError) as err:
            text_to_phonemes("zzzq", small_lexicon)
        assert err.value.token == "zzzq"

    def test_words_joined_by_boundary(self, small_lexicon):
        seq = text_to_phonemes("calm now", small_lexicon)
        assert tuple(seq) == ("K", "AA", "M", BOUNDARY, "N", "AW")

    def test_weight_tie_breaks_lexicographically(self):
        lex = load_lexicon("ah AA\nah AE\n")  # equal split 0.5/0.5
        assert lex.best_pronunciation("ah").symbols == ("AA",)

    def test_single_pronunciation_words_verbatim(self, demo_lexicon):
        for word in demo_lexicon.words:
            seq = text_to_phonemes(word, demo_lexicon)
            assert tuple(seq) == demo_lexicon.best_pronunciation(word).symbols


class TestApplyNoise:
    def test_zero_noise_is_identity_property(self):
        rng = random.Random(2024)
        spec = NoiseSpec(rng_seed=17)
        for _ in range(50):
            seq = random_sequence(rng)
            assert tuple(apply_noise(seq, spec)) == tuple(seq)

    def test_full_substitution_changes_every_position(self):
        seq = PhonemeSequence(("K", "AA", "M", "N", "AW", "B"))
        spec = NoiseSpec(substitute_prob=1.0, rng_seed=7)
        noisy = apply_noise(seq, spec)
        assert len(noisy) == len(seq)
        for old, new in zip(seq, noisy):
            assert old != new

    def test_determinism_same_seed(self):
        seq = PhonemeSequence(("K", "AA", "M", BOUNDARY, "N", "AW"))
        spec = NoiseSpec(substitute_prob=0.4, delete_prob=0.2, insert_prob=0.2, rng_seed=42)
        assert tuple(apply_noise(seq, spec)) == tuple(apply_noise(seq, spec))

    def test_deletion_never_leaves_adjacent_boundaries(self):
        rng = random.Random(5)
        for trial in range(40):
            seq = random_sequence(rng)
            noisy = apply_noise(seq, NoiseSpec(delete_prob=0.8, rng_seed=trial))
            symbols = tuple(noisy)
            assert all(
                not (a == BOUNDARY and b == BOUNDARY) for a, b in zip(symbols, symbols[1:])
            )

    def test_invalid_probabilities_rejected(self):
        with pytest.raises(UsageError):
            NoiseSpec(substitute_prob=0.7, delete_prob=0.5)
        with pytest.raises(UsageError):
            NoiseSpec(insert_prob=1.5)
