"""Inference engine: case retrieval, Bayesian correlation, adaptation, output.

Retrieval is an exhaustive scan under normalized Hamming agreement, the
response posterior is prior * exp(beta * similarity) normalized, adaptation
is placeholder substitution with session context shadowing the case's
pragmatic tags, and the output driver wraps the final text for the "text"
or "visual-text" modality (audio is rejected with a distinct code so
callers can degrade).
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    AdaptationError,
    DegeneratePriorError,
    DimensionError,
    EngineError,
    ModalityError,
    ParseError,
    RetrievalError,
    UsageError,
)
from .patterns import BipolarPattern, agreement

_PLACEHOLDER = re.compile(r"\{([A-Za-z_][A-Za-z0-9_]*)\}")
_EMPHASIS = re.compile(r"\*([^*]+)\*")

MODALITIES = ("text", "visual-text")


@dataclass(frozen=True)
class Case:
    id: str
    request_pattern: BipolarPattern
    request_words: tuple[str, ...]
    response_template: str
    pragmatic_tags: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class CaseBase:
    cases: tuple[Case, ...]

    def __post_init__(self):
        ids = [case.id for case in self.cases]
        if len(set(ids)) != len(ids):
            raise UsageError("case ids must be unique")
        dims = {case.request_pattern.dimension for case in self.cases}
        if len(dims) > 1:
            raise DimensionError(f"case patterns have mixed dimensions: {sorted(dims)}")

    def __len__(self) -> int:
        return len(self.cases)

    @property
    def dimension(self) -> int:
        if not self.cases:
            raise RetrievalError("case base is empty")
        return self.cases[0].request_pattern.dimension

    def get(self, case_id: str) -> Case:
        for case in self.cases:
            if case.id == case_id:
                return case
        raise UsageError(f"no case with id {case_id!r}")


@dataclass(frozen=True)
class ResponsePosterior:
    entries: tuple[tuple[str, float], ...]

    def __post_init__(self):
        if not self.entries:
            raise UsageError("posterior must have at least one entry")
        total = sum(p for _, p in self.entries)
        if abs(total - 1.0) > 1e-9:
            raise UsageError(f"posterior sums to {total}, not 1")
        prev = None
        for _, p in self.entries:
            if prev is not None and p > prev + 1e-12:
                raise UsageError("posterior entries must be descending")
            prev = p

    @property
    def best_id(self) -> str:
        return self.entries[0][0]


@dataclass(frozen=True)
class StageRecord:
    stage: str
    detail: dict

    def to_dict(self) -> dict:
        return {"stage": self.stage, "detail": self.detail}


@dataclass(frozen=True)
class RenderedOutput:
    text: str
    modality: str
    trace: tuple[StageRecord, ...]
    payload: dict | None = None

    def __post_init__(self):
        if not self.trace:
            raise UsageError("trace must be non-empty")

    def to_dict(self) -> dict:
        doc = {
            "text": self.text,
            "modality": self.modality,
            "trace": [record.to_dict() for record in self.trace],
        }
        if self.payload is not None:
            doc["payload"] = self.payload
        return doc


@dataclass(frozen=True)
class InferenceConfig:
    retrieve_k: int = 3
    beta: float = math.log(4.0)
    prior: dict[str, float] | None = None
    modality: str = "text"
    readout_temperature: float = 1.0


def retrieve(cb: CaseBase, query: BipolarPattern, k: int):
    """Top-k cases by normalized Hamming agreement; ties break on case id.

    The scan is exhaustive by contract, so it is its own oracle at this scale.
    """
    if len(cb) == 0:
        raise RetrievalError("case base is empty")
    if not (1 <= k <= len(cb)):
        raise UsageError(f"k must be in [1, {len(cb)}], got {k}")
    if query.dimension != cb.dimension:
        raise DimensionError(
            f"query dimension {query.dimension} does not match case dimension {cb.dimension}"
        )
    scored = [(case, agreement(query, case.request_pattern)) for case in cb.cases]
    scored.sort(key=lambda cs: (-cs[1], cs[0].id))
    return scored[:k]


def bayesian_correlate(candidates, prior: dict[str, float] | None, likelihood_sharpness: float) -> ResponsePosterior:
    """posterior(c) proportional to prior(c) * exp(beta * similarity(c)).

    Missing prior entries default to the smallest positive prior weight
    present (or 1 if there is none); an all-zero resolved prior is an error.
    """
    candidates = list(candidates)
    if not candidates:
        raise UsageError("candidates must be non-empty")
    if likelihood_sharpness <= 0:
        raise UsageError("likelihood sharpness must be positive")
    prior = dict(prior or {})
    for case_id, weight in prior.items():
        if weight < 0:
            raise UsageError(f"prior weight for {case_id!r} is negative")
    positive = [w for w in prior.values() if w > 0]
    default = min(positive) if positive else 1.0
    weights = []
    for case, sim in candidates:
        p = prior.get(case.id, default)
        weights.append((case.id, p * math.exp(likelihood_sharpness * sim)))
    total = sum(w for _, w in weights)
    if total <= 0.0:
        raise DegeneratePriorError("all resolved prior weights are zero")
    entries = [(case_id, w / total) for case_id, w in weights]
    entries.sort(key=lambda cp: (-cp[1], cp[0]))
    return ResponsePosterior(entries=tuple(entries))


def adapt(case: Case, context: dict[str, str]) -> str:
    """Resolve template placeholders from pragmatic tags, shadowed by context."""
    values = dict(case.pragmatic_tags)
    values.update(context)

    def _resolve(match: re.Match) -> str:
        name = match.group(1)
        if name not in values:
            raise AdaptationError(name)
        return str(values[name])

    return _PLACEHOLDER.sub(_resolve, case.response_template)


def _visual_payload(text: str, kind: str) -> tuple[str, dict]:
    """Strip *emphasis* markers, recording their spans in the final text."""
    spans: list[list[int]] = []
    out: list[str] = []
    cursor = 0
    plain_len = 0
    for match in _EMPHASIS.finditer(text):
        out.append(text[cursor : match.start()])
        plain_len += match.start() - cursor
        inner = match.group(1)
        spans.append([plain_len, plain_len + len(inner)])
        out.append(inner)
        plain_len += len(inner)
        cursor = match.end()
    out.append(text[cursor:])
    body = "".join(out)
    title = " ".join(body.split()[:6])
    return body, {"title": title, "body": body, "emphasis": spans, "kind": kind}


def drive_output(text: str, modality: str, trace: tuple[StageRecord, ...] = (), kind: str = "response") -> RenderedOutput:
    """Wrap final text for the requested modality; audio is not supported."""
    if modality == "audio":
        raise ModalityError("audio output is not supported; use 'text' or 'visual-text'")
    if modality not in MODALITIES:
        raise ModalityError(f"unsupported modality {modality!r}")
    if modality == "visual-text":
        body, payload = _visual_payload(text, kind)
    else:
        body, _payload = _visual_payload(text, kind)
        payload = None
    record = StageRecord(stage="drive", detail={"modality": modality})
    return RenderedOutput(text=body, modality=modality, trace=tuple(trace) + (record,), payload=payload)


def _tagged(stage: str, exc: EngineError) -> EngineError:
    if exc.stage is None:
        exc.stage = stage
    return exc


def infer(
    cb: CaseBase,
    translator,
    utterance_pattern: BipolarPattern,
    context: dict[str, str],
    config: InferenceConfig | None = None,
) -> RenderedOutput:
    """Translate -> retrieve -> correlate -> adapt -> drive, with a full trace.

    Equal to calling the stage operations by hand; stage errors propagate
    with the failing stage tagged.
    """
    config = config or InferenceConfig()
    trace: list[StageRecord] = []
    try:
        query = translator.translate(utterance_pattern)
    except EngineError as exc:
        raise _tagged("translate", exc)
    detail: dict = {"backend": translator.name}
    readout = getattr(translator, "last_readout", None)
    if readout is not None:
        detail["readout"] = [
            [str(candidate), round(m, 4)] for candidate, m in readout.candidates
        ]
    trace.append(StageRecord(stage="translate", detail=detail))

    try:
        candidates = retrieve(cb, query, min(config.retrieve_k, max(len(cb), 1)))
        posterior = bayesian_correlate(candidates, config.prior, config.beta)
    except EngineError as exc:
        raise _tagged("retrieve", exc)
    trace.append(
        StageRecord(
            stage="retrieve",
            detail={
                "similarities": [[case.id, round(sim, 4)] for case, sim in candidates],
                "posterior": [[cid, round(p, 4)] for cid, p in posterior.entries],
            },
        )
    )

    chosen = cb.get(posterior.best_id)
    try:
        text = adapt(chosen, context)
    except EngineError as exc:
        raise _tagged("adapt", exc)
    trace.append(StageRecord(stage="adapt", detail={"case_id": chosen.id}))

    try:
        return drive_output(text, config.modality, trace=tuple(trace))
    except EngineError as exc:
        raise _tagged("drive", exc)


def casebase_to_json(cb: CaseBase) -> str:
    docs = [
        {
            "id": case.id,
            "request_words": list(case.request_words),
            "request_pattern": case.request_pattern.to_list(),
            "response_template": case.response_template,
            "pragmatic_tags": dict(sorted(case.pragmatic_tags.items())),
        }
        for case in cb.cases
    ]
    return json.dumps(docs, sort_keys=True, indent=2) + "\n"


def casebase_from_json(text: str) -> CaseBase:
    try:
        docs = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid case-base JSON: {exc}")
    if not isinstance(docs, list):
        raise ParseError("case-base file must contain a JSON array of cases")
    cases = []
    for doc in docs:
        cases.append(
            Case(
                id=str(doc["id"]),
                request_pattern=BipolarPattern(np.array(doc["request_pattern"], dtype=np.int8)),
                request_words=tuple(doc["request_words"]),
                response_template=str(doc["response_template"]),
                pragmatic_tags={str(k): str(v) for k, v in doc.get("pragmatic_tags", {}).items()},
            )
        )
    return CaseBase(cases=tuple(cases))


def save_casebase(cb: CaseBase, path) -> None:
    Path(path).write_text(casebase_to_json(cb), encoding="utf-8")


def load_casebase(path) -> CaseBase:
    return casebase_from_json(Path(path).read_text(encoding="utf-8"))
