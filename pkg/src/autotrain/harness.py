"""Synthetic scenario suites and the per-backend precision comparison table.

A suite bundles a generated lexicon, a case base keyed by encoded request
patterns, and a scripted utterance list with expected decodes and case ids.
The harness measures precision at the NLP stage (noisy phonemes decoded back
to the expected words, assisted by the backend) and at the I/O stage (full
pipeline ends on the expected case), plus an adaptation delta from one
retraining round on held-out scenarios. Reference percentages from the
original report are printed alongside as documentation only: no dataset,
noise model, or scoring protocol was ever published for them, so they are
not reproducible and never asserted.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field, replace
from pathlib import Path

from .boltzmann import AnnealSchedule, boltzmann_train, initialized_machine
from .cbr import Case, CaseBase, InferenceConfig, infer
from .errors import ConfigError, EngineError, NoParseError, ReportError
from .hopfield import hopfield_recall, hopfield_store
from .ngram import DecoderConfig, NGramModel, decode_phonemes, train_ngram
from .patterns import BipolarPattern, encode_pattern, nearest_sequence, pattern_dimension
from .perceptron import perceptron_train
from .phonemes import INVENTORY, Lexicon, NoiseSpec, PhonemeSequence, Pronunciation, apply_noise, text_to_phonemes
from .translate import BoltzmannTranslator, HopfieldTranslator, PerceptronTranslator, case_code

BACKENDS = ("hopfield", "perceptron", "boltzmann")

#: Percentages from the original report's comparison table. Documentation
#: reference only: the underlying corpus and protocol are unpublished, so
#: these are labeled non-reproducible and never used as expectations.
PAPER_REFERENCE = (
    ("hopfield", 66.0, 54.0, "Very High"),
    ("perceptron", 54.0, 55.0, "Medium"),
    ("boltzmann", 48.0, 58.5, "High"),
)
PAPER_REFERENCE_NOTE = "paper-reported, not reproducible (no published dataset)"


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 0
    lexicon_size: int = 12
    utterance_count: int = 10
    min_pron_len: int = 3
    max_pron_len: int = 5
    max_words_per_utterance: int = 2
    noise: NoiseSpec = field(default_factory=lambda: NoiseSpec(substitute_prob=0.1))
    ngram_order: int = 3
    smoothing_k: float = 1.0
    edit_penalty: float = 4.0
    max_edits: int = 2
    retrieve_k: int = 3
    holdout_fraction: float = 0.2
    bm_hidden: int = 0
    bm_epochs: int = 60
    bm_learning_rate: float = 0.3

    def __post_init__(self):
        if self.lexicon_size < 2:
            raise ConfigError(f"lexicon_size must be >= 2, got {self.lexicon_size}")
        if self.utterance_count < 1:
            raise ConfigError(f"utterance_count must be >= 1, got {self.utterance_count}")
        if not (2 <= self.min_pron_len <= self.max_pron_len):
            raise ConfigError("need 2 <= min_pron_len <= max_pron_len")
        if self.max_words_per_utterance < 1:
            raise ConfigError("max_words_per_utterance must be >= 1")


@dataclass(frozen=True)
class Scenario:
    text: str
    expected_words: tuple[str, ...]
    expected_case_id: str


@dataclass(frozen=True)
class ScenarioSuite:
    rng_seed: int
    lexicon: Lexicon
    case_base: CaseBase
    utterances: tuple[Scenario, ...]
    noise: NoiseSpec
    slots: int
    config: SuiteConfig

    @property
    def dimension(self) -> int:
        return pattern_dimension(self.slots)

    def clean_sequence(self, scenario: Scenario) -> PhonemeSequence:
        return text_to_phonemes(scenario.text, self.lexicon)


_TEMPLATES = (
    "step {step}: rest and picture {target}",
    "now breathe while holding {target} in mind",
    "let {target} grow calm, step {step}",
    "turn attention to {target} and settle",
)


def generate_suite(config: SuiteConfig) -> ScenarioSuite:
    """Deterministic lexicon, case base, and utterance script from the seed."""
    rng = random.Random(config.seed)
    words: dict[str, tuple[str, ...]] = {}
    seen_prons: set[tuple[str, ...]] = set()
    while len(words) < config.lexicon_size:
        word = "".join(rng.choice("abcdefghijklmnopqrstuvwxyz") for _ in range(rng.randint(3, 6)))
        pron = tuple(
            rng.choice(INVENTORY)
            for _ in range(rng.randint(config.min_pron_len, config.max_pron_len))
        )
        if word in words or pron in seen_prons:
            continue
        words[word] = pron
        seen_prons.add(pron)
    lexicon = Lexicon({w: (Pronunciation(p, 1.0),) for w, p in words.items()})

    word_list = sorted(words)
    utterance_words: list[tuple[str, ...]] = []
    seen_utts: set[tuple[str, ...]] = set()
    guard = 0
    while len(utterance_words) < config.utterance_count:
        guard += 1
        if guard > 10000:
            raise ConfigError("cannot generate enough distinct utterances; enlarge the lexicon")
        n = rng.randint(1, config.max_words_per_utterance)
        utt = tuple(rng.choice(word_list) for _ in range(n))
        if utt in seen_utts:
            continue
        seen_utts.add(utt)
        utterance_words.append(utt)

    clean_seqs = [text_to_phonemes(" ".join(utt), lexicon) for utt in utterance_words]
    slots = max(len(seq) for seq in clean_seqs) + 2
    dimension = pattern_dimension(slots)

    cases = []
    scenarios = []
    for idx, (utt, seq) in enumerate(zip(utterance_words, clean_seqs)):
        case_id = f"case-{idx:02d}"
        template = _TEMPLATES[idx % len(_TEMPLATES)]
        cases.append(
            Case(
                id=case_id,
                request_pattern=encode_pattern(seq, dimension),
                request_words=utt,
                response_template=template,
                pragmatic_tags={"target": utt[0], "step": str(idx + 1)},
            )
        )
        scenarios.append(
            Scenario(text=" ".join(utt), expected_words=utt, expected_case_id=case_id)
        )
    return ScenarioSuite(
        rng_seed=config.seed,
        lexicon=lexicon,
        case_base=CaseBase(cases=tuple(cases)),
        utterances=tuple(scenarios),
        noise=config.noise,
        slots=slots,
        config=config,
    )


def load_suite_config(path) -> SuiteConfig:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    noise_doc = doc.pop("noise", None)
    if noise_doc is not None:
        doc["noise"] = NoiseSpec(**noise_doc)
    try:
        return SuiteConfig(**doc)
    except TypeError as exc:
        raise ConfigError(f"bad suite config: {exc}")


def utterance_noise(suite: ScenarioSuite, index: int, noise: NoiseSpec | None = None) -> NoiseSpec:
    """Per-utterance seed derivation so repeated runs are bit-identical."""
    base = noise if noise is not None else suite.noise
    return replace(base, rng_seed=base.rng_seed + 101 * index + 1)


def _settle_schedule(free_units: int, rng_seed: int) -> AnnealSchedule:
    return AnnealSchedule(
        t_initial=4.0,
        decay=0.85,
        steps_per_temp=10 * max(free_units, 1),
        t_final=0.05,
        rng_seed=rng_seed,
    )


def _train_schedule(free_units: int, rng_seed: int) -> AnnealSchedule:
    return AnnealSchedule(
        t_initial=4.0,
        decay=0.8,
        steps_per_temp=10 * max(free_units, 1),
        t_final=0.4,
        rng_seed=rng_seed,
    )


@dataclass
class BackendBundle:
    """A trained backend plus everything the measurements need around it."""

    backend: str
    suite: ScenarioSuite
    model: NGramModel
    decoder: DecoderConfig
    translator: object
    trained_indices: tuple[int, ...]
    _stored_set: set = field(default_factory=set, repr=False)

    def decode_words(self, seq: PhonemeSequence) -> tuple[str, ...]:
        result = decode_phonemes(seq, self.suite.lexicon, self.model, 1, self.decoder)
        return result.words

    def _encode_guarded(self, seq: PhonemeSequence) -> BipolarPattern:
        symbols = tuple(seq)
        slots = self.suite.slots
        if len(symbols) > slots:
            symbols = symbols[:slots]  # insertion overflow: clip before encoding
        return encode_pattern(PhonemeSequence.normalized(symbols), self.suite.dimension)

    def assisted_sequence(self, noisy: PhonemeSequence) -> PhonemeSequence:
        """Backend-assisted cleanup of a noisy sequence before word decoding.

        Hopfield: recall the encoded probe (exact stored probes pass through)
        and read the recalled state back slot-wise. Boltzmann / perceptron:
        classify to the nearest known request pattern and use its clean
        sequence. Cleanup failures fall back to the raw sequence.
        """
        try:
            pattern = self._encode_guarded(noisy)
        except EngineError:
            return noisy
        translator = self.translator
        if self.backend == "hopfield":
            if pattern in self._stored_set:
                return noisy
            recalled, _ = hopfield_recall(
                translator.net, pattern, translator.max_sweeps, translator.rng_seed
            )
            return nearest_sequence(recalled)
        query = translator.translate(pattern)
        return nearest_sequence(query)

    def nlp_words(self, noisy: PhonemeSequence) -> tuple[str, ...]:
        cleaned = self.assisted_sequence(noisy)
        try:
            return self.decode_words(cleaned)
        except NoParseError:
            pass
        if tuple(cleaned) != tuple(noisy):
            try:
                return self.decode_words(noisy)
            except NoParseError:
                pass
        return ()


def train_backend(
    suite: ScenarioSuite, backend: str, indices: tuple[int, ...] | None = None
) -> BackendBundle:
    """Train one backend on the given scenario indices (default: all)."""
    if backend not in BACKENDS:
        raise ConfigError(f"unknown backend {backend!r}; expected one of {BACKENDS}")
    config = suite.config
    if indices is None:
        indices = tuple(range(len(suite.utterances)))
    clean_seqs = [suite.clean_sequence(s) for s in suite.utterances]
    model = train_ngram(clean_seqs, config.ngram_order, config.smoothing_k)
    decoder = DecoderConfig(edit_penalty=config.edit_penalty, max_edits=config.max_edits)
    cases = suite.case_base.cases
    patterns = [case.request_pattern for case in cases]
    labels = [case.id for case in cases]
    count = len(cases)

    if backend == "hopfield":
        subset = [patterns[i] for i in indices]
        net = hopfield_store(subset)
        translator = HopfieldTranslator(
            net=net,
            stored=tuple(subset),
            labels=tuple(labels[i] for i in indices),
            max_sweeps=20,
            rng_seed=suite.rng_seed + 17,
        )
        bundle = BackendBundle(backend, suite, model, decoder, translator, tuple(indices))
        bundle._stored_set = set(subset)
        return bundle

    if backend == "perceptron":
        data = [(patterns[i], i) for i in indices]
        perc, _converged = perceptron_train(data, epochs=200, classes=count)
        translator = PerceptronTranslator(
            model=perc, targets=tuple(patterns), labels=tuple(labels)
        )
        return BackendBundle(backend, suite, model, decoder, translator, tuple(indices))

    codes = [case_code(i, count) for i in range(count)]
    machine = initialized_machine(
        n_in=suite.dimension,
        n_out=count,
        n_hidden=config.bm_hidden,
        weight_scale=0.01,
        rng_seed=suite.rng_seed + 29,
        schedule=_settle_schedule(count + config.bm_hidden, suite.rng_seed + 31),
    )
    pairs = [(patterns[i], codes[i]) for i in indices]
    trained = boltzmann_train(
        machine,
        pairs,
        epochs=config.bm_epochs,
        learning_rate=config.bm_learning_rate,
        schedule=_train_schedule(count + config.bm_hidden, suite.rng_seed + 37),
        correlation="exact" if count + config.bm_hidden <= 16 else "sampled",
    )
    translator = BoltzmannTranslator(
        machine=trained,
        schedule=machine.schedule,
        codes=tuple(codes),
        targets=tuple(patterns),
        labels=tuple(labels),
    )
    return BackendBundle(backend, suite, model, decoder, translator, tuple(indices))


def measure_nlp_precision(
    suite: ScenarioSuite, bundle: BackendBundle, noise: NoiseSpec | None = None
) -> float:
    """Fraction of utterances whose backend-assisted decode matches exactly."""
    if not suite.utterances:
        raise ConfigError("suite has no utterances")
    correct = 0
    for idx, scenario in enumerate(suite.utterances):
        clean = suite.clean_sequence(scenario)
        noisy = apply_noise(clean, utterance_noise(suite, idx, noise))
        if bundle.nlp_words(noisy) == scenario.expected_words:
            correct += 1
    return correct / len(suite.utterances)


def pipeline_case_id(
    suite: ScenarioSuite,
    bundle: BackendBundle,
    noisy: PhonemeSequence,
    inference: InferenceConfig | None = None,
) -> str | None:
    """Run decode -> encode -> infer and report the chosen case id (None = no parse)."""
    try:
        words = bundle.decode_words(noisy)
    except NoParseError:
        return None
    if not words:
        return None
    realization = text_to_phonemes(" ".join(words), suite.lexicon)
    try:
        pattern = bundle._encode_guarded(realization)
    except EngineError:
        return None
    cfg = inference or InferenceConfig(retrieve_k=min(suite.config.retrieve_k, len(suite.case_base)))
    output = infer(suite.case_base, bundle.translator, pattern, {}, cfg)
    for record in output.trace:
        if record.stage == "adapt":
            return record.detail["case_id"]
    return None


def measure_io_precision(
    suite: ScenarioSuite,
    bundle: BackendBundle,
    noise: NoiseSpec | None = None,
    indices: tuple[int, ...] | None = None,
) -> float:
    """Fraction of utterances where the full pipeline picks the expected case."""
    if indices is None:
        indices = tuple(range(len(suite.utterances)))
    if not indices:
        raise ConfigError("no utterances to measure")
    correct = 0
    for idx in indices:
        scenario = suite.utterances[idx]
        clean = suite.clean_sequence(scenario)
        noisy = apply_noise(clean, utterance_noise(suite, idx, noise))
        if pipeline_case_id(suite, bundle, noisy) == scenario.expected_case_id:
            correct += 1
    return correct / len(indices)


@dataclass(frozen=True)
class BackendRow:
    backend: str
    nlp_precision: float
    io_precision: float
    adaptation_delta: float


@dataclass(frozen=True)
class PrecisionReport:
    rows: tuple[BackendRow, ...]
    suite_seed: int
    utterance_count: int
    holdout_count: int

    def row(self, backend: str) -> BackendRow:
        for row in self.rows:
            if row.backend == backend:
                return row
        raise ReportError(f"report has no row for backend {backend!r}")


def holdout_split(suite: ScenarioSuite) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Seed-derived (training, held-out) index split for the adaptation round."""
    count = len(suite.utterances)
    k = max(1, round(suite.config.holdout_fraction * count))
    if k >= count:
        k = count - 1 if count > 1 else 0
    rng = random.Random(suite.rng_seed + 4099)
    held = tuple(sorted(rng.sample(range(count), k))) if k else ()
    train = tuple(i for i in range(count) if i not in held)
    return train, held


def adaptation_delta(suite: ScenarioSuite, backend: str, full_bundle: BackendBundle) -> float:
    """Held-out IO improvement after one retraining round on the full suite."""
    train_idx, held = holdout_split(suite)
    if not held:
        return 0.0
    partial = train_backend(suite, backend, indices=train_idx)
    before = measure_io_precision(suite, partial, indices=held)
    after = measure_io_precision(suite, full_bundle, indices=held)
    return after - before


def run_report(suite: ScenarioSuite) -> PrecisionReport:
    rows = []
    _, held = holdout_split(suite)
    for backend in BACKENDS:
        bundle = train_backend(suite, backend)
        rows.append(
            BackendRow(
                backend=backend,
                nlp_precision=measure_nlp_precision(suite, bundle),
                io_precision=measure_io_precision(suite, bundle),
                adaptation_delta=adaptation_delta(suite, backend, bundle),
            )
        )
    return PrecisionReport(
        rows=tuple(rows),
        suite_seed=suite.rng_seed,
        utterance_count=len(suite.utterances),
        holdout_count=len(held),
    )


def _check_complete(report: PrecisionReport) -> None:
    have = {row.backend for row in report.rows}
    missing = [b for b in BACKENDS if b not in have]
    if missing:
        raise ReportError(f"report is missing backend rows: {missing}")


def emit_table(report: PrecisionReport, fmt: str = "table") -> str:
    """Render the three-backend comparison in the report's row order.

    Formats: aligned text ("table"), "csv", "json". Every rendering carries
    the reference percentages labeled as non-reproducible documentation.
    """
    _check_complete(report)
    ordered = [report.row(b) for b in BACKENDS]
    if fmt == "json":
        doc = {
            "suite_seed": report.suite_seed,
            "utterance_count": report.utterance_count,
            "holdout_count": report.holdout_count,
            "rows": [
                {
                    "backend": row.backend,
                    "nlp_precision": round(row.nlp_precision, 4),
                    "io_precision": round(row.io_precision, 4),
                    "adaptation_delta": round(row.adaptation_delta, 4),
                }
                for row in ordered
            ],
            "reference": {
                "note": PAPER_REFERENCE_NOTE,
                "rows": [
                    {
                        "backend": name,
                        "nlp_percent": nlp,
                        "io_percent": io,
                        "adaptive_capability": cap,
                    }
                    for name, nlp, io, cap in PAPER_REFERENCE
                ],
            },
        }
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        lines = ["backend,nlp_precision,io_precision,adaptation_delta"]
        for row in ordered:
            lines.append(
                f"{row.backend},{row.nlp_precision:.4f},{row.io_precision:.4f},{row.adaptation_delta:.4f}"
            )
        lines.append(f"# reference ({PAPER_REFERENCE_NOTE})")
        for name, nlp, io, cap in PAPER_REFERENCE:
            lines.append(f"# {name},{nlp}%,{io}%,{cap}")
        return "\n".join(lines) + "\n"
    if fmt != "table":
        raise ConfigError(f"unknown table format {fmt!r}")
    header = f"{'backend':<12} {'nlp_precision':>14} {'io_precision':>13} {'adaptation_delta':>17}"
    lines = [header, "-" * len(header)]
    for row in ordered:
        lines.append(
            f"{row.backend:<12} {row.nlp_precision:>14.4f} {row.io_precision:>13.4f} {row.adaptation_delta:>17.4f}"
        )
    lines.append("")
    lines.append(f"reference values ({PAPER_REFERENCE_NOTE}):")
    for name, nlp, io, cap in PAPER_REFERENCE:
        lines.append(f"  {name:<12} nlp {nlp}%  io {io}%  adaptive capability: {cap}")
    return "\n".join(lines) + "\n"
