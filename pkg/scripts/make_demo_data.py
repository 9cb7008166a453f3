#!/usr/bin/env python3
"""Regenerate the bundled demo data under src/autotrain/data/.

Run from the repo root after changing the lexicon, cases, or any format:
    python3 scripts/make_demo_data.py
"""

from __future__ import annotations

import json
from pathlib import Path

from autotrain.cbr import Case, CaseBase, save_casebase
from autotrain.ngram import save_model, train_ngram
from autotrain.patterns import encode_pattern, pattern_dimension
from autotrain.phonemes import load_lexicon, text_to_phonemes

DATA = Path(__file__).resolve().parents[1] / "src" / "autotrain" / "data"

LEXICON = """\
# guided-relaxation demo lexicon (word PH1 ... PHn [weight])
relax R IH L AE K S
calm K AA M
breathe B R IY DH
arms AA R M Z
legs L EH G Z
heavy HH EH V IY
warm W AO R M
slowly S L OW L IY
deeply D IY P L IY
focus F OW K AH S
begin B IH G IH N
now N AW
feel F IY L
my M AY
i AY
am AE M
and AE N D
your Y AO R
close K L OW Z
eyes AY Z
open OW P AH N
let L EH T
go G OW
rest R EH S T
ready R EH D IY
finish F IH N IH SH
"""

CORPUS = [
    "begin now",
    "i am ready",
    "close your eyes now",
    "breathe slowly",
    "my arms feel heavy",
    "my legs feel warm",
    "relax your arms",
    "i am calm",
    "focus deeply",
    "let go and rest",
    "open your eyes",
    "finish now",
]

# (id, request text, template, tags)
CASES = [
    ("intake-ready", "i am ready",
     "Good. Settle into your chair and *begin*.", {"phase_advance": "true"}),
    ("intake-begin", "begin now",
     "We start now. Sit comfortably and exhale once.", {"phase_advance": "true"}),
    ("induction-eyes", "close your eyes now",
     "Close your eyes and breathe {pace}.", {"pace": "slowly", "phase_advance": "true"}),
    ("deepen-breathe", "breathe slowly",
     "Breathe in... and out. Notice the {part} grow loose.",
     {"part": "shoulders", "phase_advance": "true"}),
    ("exercise-arms-heavy", "my arms feel heavy",
     "Say quietly: my arms are *heavy*. Repeat it {count} times.", {"count": "3"}),
    ("exercise-legs-warm", "my legs feel warm",
     "Say quietly: my legs are *warm*. Repeat it {count} times.", {"count": "3"}),
    ("exercise-relax-arms", "relax your arms",
     "Let both arms rest. Feel the {support} hold them.", {"support": "chair"}),
    ("exercise-calm", "i am calm",
     "Hold the thought: I am completely calm.", {}),
    ("closing-letgo", "let go and rest",
     "Let everything go. Rest for a moment in the quiet.", {"phase_advance": "true"}),
    ("closing-open", "open your eyes",
     "When you are ready, open your eyes. Session phase: {phase}.", {}),
    ("closing-finish", "finish now",
     "We are done. *Well done.*", {}),
]

SCRIPT = [
    "i am ready",
    "close your eyes now",
    "breathe slowly",
    "my arms feel heavy",
    "relax your arms",
    "zzzq",
    "my legs feel warm",
    "i am calm",
    "let go and rest",
    "open your eyes",
]

SESSION_CONFIG = {
    "lexicon": "lexicon.txt",
    "model": "model.json",
    "case_base": "cases.json",
    "backend": "hopfield",
    "seed": 7,
    "modality": "visual-text",
}

SUITE_CONFIG = {
    "seed": 11,
    "lexicon_size": 12,
    "utterance_count": 10,
    "noise": {"substitute_prob": 0.15, "rng_seed": 11},
}


def main() -> None:
    DATA.mkdir(parents=True, exist_ok=True)
    (DATA / "lexicon.txt").write_text(LEXICON, encoding="utf-8")
    (DATA / "corpus.txt").write_text("\n".join(CORPUS) + "\n", encoding="utf-8")
    (DATA / "script.txt").write_text("\n".join(SCRIPT) + "\n", encoding="utf-8")
    (DATA / "session.json").write_text(
        json.dumps(SESSION_CONFIG, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    (DATA / "suite.json").write_text(
        json.dumps(SUITE_CONFIG, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )

    lexicon = load_lexicon(LEXICON)
    corpus = [text_to_phonemes(line, lexicon) for line in CORPUS]
    model = train_ngram(corpus, order=3, smoothing=1.0)
    save_model(model, DATA / "model.json")

    slots = max(len(text_to_phonemes(text, lexicon)) for _, text, _, _ in CASES) + 2
    dim = pattern_dimension(slots)
    cases = []
    for case_id, request, template, tags in CASES:
        words = tuple(request.split())
        cases.append(
            Case(
                id=case_id,
                request_pattern=encode_pattern(text_to_phonemes(request, lexicon), dim),
                request_words=words,
                response_template=template,
                pragmatic_tags=tags,
            )
        )
    save_casebase(CaseBase(cases=tuple(cases)), DATA / "cases.json")

    # golden transcript: the scripted session, frozen for regression checks
    from autotrain.session import load_session_config, open_session, process_utterance, transcript_json

    state = open_session(load_session_config(DATA / "session.json"))
    for line in SCRIPT:
        state, _ = process_utterance(state, line)
    (DATA / "golden_transcript.json").write_text(transcript_json(state), encoding="utf-8")
    print(f"wrote demo data to {DATA} (slots={slots}, dim={dim}, cases={len(cases)})")


if __name__ == "__main__":
    main()
