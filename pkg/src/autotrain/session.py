"""Interactive session runtime: config, state machine, and the utterance pipeline.

Each utterance runs text -> phonemes -> (configured noise) -> n-gram decode
-> pattern encoding -> case inference. Out-of-vocabulary input and decode
failures produce a clarification response that echoes the raw material and
leaves the phase untouched. The phase advances along
intake -> induction -> deepening -> exercise -> closing whenever the chosen
case carries the pragmatic tag ``phase_advance: "true"``; the flow itself
lives in case data, not in code.
"""

from __future__ import annotations

import hashlib
import json
import math
import uuid
from dataclasses import dataclass, field, replace
from pathlib import Path

from .boltzmann import boltzmann_train, initialized_machine
from .cbr import (
    InferenceConfig,
    RenderedOutput,
    StageRecord,
    drive_output,
    infer,
    load_casebase,
)
from .errors import (
    ConfigError,
    EngineError,
    NoParseError,
    OOVError,
    StartupError,
)
from .harness import BACKENDS, _settle_schedule, _train_schedule
from .hopfield import hopfield_store
from .netio import load_network
from .ngram import DecoderConfig, decode_phonemes, load_model, suggest_completions
from .patterns import SLOT_WIDTH, encode_pattern
from .perceptron import perceptron_train
from .phonemes import NoiseSpec, PhonemeSequence, apply_noise, load_lexicon, text_to_phonemes
from .translate import BoltzmannTranslator, HopfieldTranslator, PerceptronTranslator, case_code

PHASES = ("intake", "induction", "deepening", "exercise", "closing")


@dataclass(frozen=True)
class SessionConfig:
    lexicon_path: str
    model_path: str
    casebase_path: str
    backend: str = "hopfield"
    net_path: str | None = None
    noise: NoiseSpec | None = None
    seed: int | None = None
    modality: str = "visual-text"
    retrieve_k: int = 3
    beta: float = math.log(4.0)
    edit_penalty: float = 4.0
    max_edits: int = 2
    context: dict[str, str] = field(default_factory=dict)
    bm_epochs: int = 40
    bm_learning_rate: float = 0.3

    def __post_init__(self):
        if self.backend not in BACKENDS:
            raise ConfigError(f"unknown backend {self.backend!r}; expected one of {BACKENDS}")
        if self.modality not in ("text", "visual-text"):
            raise ConfigError(f"unsupported session modality {self.modality!r}")


def load_session_config(path) -> SessionConfig:
    """Read a JSON session config; relative resource paths resolve beside it."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise StartupError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid session config JSON: {exc}")
    base = path.parent

    def resolve(name):
        value = doc.get(name)
        if value is None:
            return None
        return str((base / value) if not Path(value).is_absolute() else Path(value))

    noise = doc.get("noise")
    kwargs = {
        "lexicon_path": resolve("lexicon"),
        "model_path": resolve("model"),
        "casebase_path": resolve("case_base"),
        "backend": doc.get("backend", "hopfield"),
        "net_path": resolve("net"),
        "noise": NoiseSpec(**noise) if noise else None,
        "seed": doc.get("seed"),
        "modality": doc.get("modality", "visual-text"),
        "context": {str(k): str(v) for k, v in doc.get("context", {}).items()},
    }
    for key in ("retrieve_k", "beta", "edit_penalty", "max_edits", "bm_epochs", "bm_learning_rate"):
        if key in doc:
            kwargs[key] = doc[key]
    for name in ("lexicon_path", "model_path", "casebase_path"):
        if kwargs[name] is None:
            raise ConfigError(f"session config is missing {name.removesuffix('_path')!r}")
    return SessionConfig(**kwargs)


class SessionEngine:
    """Loaded resources shared by every session this process serves."""

    def __init__(self, config: SessionConfig):
        self.config = config
        self.lexicon = self._load(config.lexicon_path, "lexicon", lambda p: load_lexicon(Path(p).read_text(encoding="utf-8")))
        self.model = self._load(config.model_path, "model", load_model)
        self.case_base = self._load(config.casebase_path, "case base", load_casebase)
        if len(self.case_base) == 0:
            raise StartupError(f"case base {config.casebase_path} is empty")
        dim = self.case_base.dimension
        if dim % SLOT_WIDTH != 0:
            raise StartupError("case pattern dimension is not a whole number of slots")
        self.slots = dim // SLOT_WIDTH
        self.decoder = DecoderConfig(edit_penalty=config.edit_penalty, max_edits=config.max_edits)
        self._translators: dict[str, object] = {}

    @staticmethod
    def _load(path, what, loader):
        try:
            return loader(path)
        except FileNotFoundError:
            raise StartupError(f"cannot load {what}: file not found: {path}")
        except EngineError as exc:
            raise StartupError(f"cannot load {what} from {path}: {exc}")

    def translator(self, backend: str):
        if backend in self._translators:
            return self._translators[backend]
        cases = self.case_base.cases
        patterns = [case.request_pattern for case in cases]
        labels = tuple(case.id for case in cases)
        count = len(cases)
        seed = self.config.seed or 0
        if backend == "hopfield":
            trans = HopfieldTranslator(
                net=hopfield_store(patterns),
                stored=tuple(patterns),
                labels=labels,
                max_sweeps=20,
                rng_seed=seed + 17,
            )
        elif backend == "perceptron":
            model, _ = perceptron_train(
                [(p, i) for i, p in enumerate(patterns)], epochs=200, classes=count
            )
            trans = PerceptronTranslator(model=model, targets=tuple(patterns), labels=labels)
        else:
            codes = [case_code(i, count) for i in range(count)]
            if self.config.net_path:
                machine = self._load(self.config.net_path, "network", load_network)
            else:
                machine = initialized_machine(
                    n_in=self.case_base.dimension,
                    n_out=count,
                    n_hidden=0,
                    weight_scale=0.01,
                    rng_seed=seed + 29,
                    schedule=_settle_schedule(count, seed + 31),
                )
                machine = boltzmann_train(
                    machine,
                    [(patterns[i], codes[i]) for i in range(count)],
                    epochs=self.config.bm_epochs,
                    learning_rate=self.config.bm_learning_rate,
                    schedule=_train_schedule(count, seed + 37),
                    correlation="exact" if count <= 16 else "sampled",
                )
            trans = BoltzmannTranslator(
                machine=machine,
                schedule=machine.schedule,
                codes=tuple(codes),
                targets=tuple(patterns),
                labels=labels,
            )
        self._translators[backend] = trans
        return trans

    def open(
        self,
        backend: str | None = None,
        seed: int | None = None,
        modality: str | None = None,
        noise: NoiseSpec | None = None,
    ) -> "SessionState":
        backend = backend or self.config.backend
        if backend not in BACKENDS:
            raise ConfigError(f"unknown backend {backend!r}")
        modality = modality or self.config.modality
        if modality not in ("text", "visual-text"):
            raise ConfigError(f"unsupported session modality {modality!r}")
        seed = self.config.seed if seed is None else seed
        if seed is not None:
            session_id = hashlib.sha256(f"session:{seed}".encode()).hexdigest()[:16]
        else:
            session_id = uuid.uuid4().hex[:16]
        self.translator(backend)  # build eagerly so startup errors surface here
        return SessionState(
            session_id=session_id,
            phase=PHASES[0],
            context=dict(self.config.context),
            history=[],
            rng_seed=seed,
            backend=backend,
            modality=modality,
            noise=noise if noise is not None else self.config.noise,
            engine=self,
        )


@dataclass
class SessionState:
    session_id: str
    phase: str
    context: dict[str, str]
    history: list
    rng_seed: int | None
    backend: str
    modality: str
    noise: NoiseSpec | None
    engine: SessionEngine = field(repr=False, default=None)

    @property
    def phase_index(self) -> int:
        return PHASES.index(self.phase)


def open_session(config: SessionConfig) -> SessionState:
    """Fresh session: phase intake, empty history, seed-derived id when seeded."""
    return SessionEngine(config).open()


def _clarification(state: SessionState, reason: str, echo: str, decode_detail: dict) -> RenderedOutput:
    record = StageRecord(stage="decode", detail=decode_detail)
    text = f"I could not follow that ({reason}). I heard: {echo}. Could you rephrase?"
    return drive_output(text, state.modality, trace=(record,), kind="clarify")


def process_utterance(state: SessionState, text: str) -> tuple[SessionState, RenderedOutput]:
    """Run one utterance through the pipeline, appending to history.

    Clarifications (OOV / empty / no parse) do not consume a phase
    transition; stage errors propagate with their stage tag and leave the
    session usable.
    """
    engine = state.engine
    index = len(state.history)
    detail: dict = {"utterance": text}

    try:
        seq = text_to_phonemes(text, engine.lexicon)
    except OOVError as exc:
        out = _clarification(state, "unknown word", exc.token, {**detail, "oov": exc.token})
        state.history.append((text, out))
        return state, out

    if state.noise is not None:
        noisy = apply_noise(seq, replace(state.noise, rng_seed=state.noise.rng_seed + index))
    else:
        noisy = seq
    detail["phonemes"] = str(noisy)

    if len(noisy) == 0:
        out = _clarification(state, "empty utterance", "(silence)", detail)
        state.history.append((text, out))
        return state, out

    try:
        decoded = decode_phonemes(noisy, engine.lexicon, engine.model, 1, engine.decoder)
    except NoParseError:
        hints = suggest_completions(noisy, engine.lexicon)
        if hints:
            detail["suggestions"] = list(hints)
        out = _clarification(state, "no parse", str(noisy), detail)
        state.history.append((text, out))
        return state, out

    detail["words"] = " ".join(decoded.words)
    detail["score"] = round(decoded.score, 4)
    decode_record = StageRecord(stage="decode", detail=detail)

    realization = text_to_phonemes(" ".join(decoded.words), engine.lexicon)
    symbols = tuple(realization)[: engine.slots]
    pattern = encode_pattern(PhonemeSequence.normalized(symbols), engine.case_base.dimension)

    inference = InferenceConfig(
        retrieve_k=min(engine.config.retrieve_k, len(engine.case_base)),
        beta=engine.config.beta,
        modality=state.modality,
    )
    context = {**state.context, "phase": state.phase, "modality": state.modality}
    result = infer(engine.case_base, engine.translator(state.backend), pattern, context, inference)
    out = RenderedOutput(
        text=result.text,
        modality=result.modality,
        trace=(decode_record,) + result.trace,
        payload=result.payload,
    )

    chosen_id = next(r.detail["case_id"] for r in result.trace if r.stage == "adapt")
    chosen = engine.case_base.get(chosen_id)
    if chosen.pragmatic_tags.get("phase_advance") == "true" and state.phase != PHASES[-1]:
        state.phase = PHASES[state.phase_index + 1]

    state.history.append((text, out))
    return state, out


def response_line(output: RenderedOutput, phase: str) -> str:
    """One canonical JSON line per response (CLI line mode and golden transcripts)."""
    doc = {"response": output.to_dict(), "phase": phase}
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def history_doc(state: SessionState) -> list:
    return [
        {"utterance": utterance, "response": output.to_dict()}
        for utterance, output in state.history
    ]


def transcript_json(state: SessionState) -> str:
    """Canonical, byte-stable rendering of the full session history."""
    return json.dumps(history_doc(state), sort_keys=True, indent=2) + "\n"
