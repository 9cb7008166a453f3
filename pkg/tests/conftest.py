from __future__ import annotations

from pathlib import Path

import pytest

from autotrain.phonemes import Lexicon, Pronunciation, load_lexicon

DATA_DIR = Path(__file__).resolve().parents[1] / "src" / "autotrain" / "data"

FIVE_WORD_LEXICON = """\
relax R IH L AE K S
calm K AA M
breathe B R IY DH
arms AA R M Z
now N AW
"""


@pytest.fixture(scope="session")
def small_lexicon() -> Lexicon:
    return load_lexicon(FIVE_WORD_LEXICON)


@pytest.fixture(scope="session")
def demo_lexicon() -> Lexicon:
    return load_lexicon((DATA_DIR / "lexicon.txt").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


def make_lexicon(entries: dict[str, tuple[str, ...]]) -> Lexicon:
    """Single-pronunciation lexicon from {word: phoneme tuple}."""
    return Lexicon({w: (Pronunciation(tuple(p), 1.0),) for w, p in entries.items()})
