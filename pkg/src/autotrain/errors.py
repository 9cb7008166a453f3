"""Shared exception types with stable error codes across the engine."""

from __future__ import annotations


class EngineError(Exception):
    """Base error. Carries a stable ``code`` and an optional pipeline ``stage`` tag."""

    code = "engine_error"

    def __init__(self, message: str, *, stage: str | None = None):
        super().__init__(message)
        self.stage = stage

    @property
    def message(self) -> str:
        return str(self)


class ParseError(EngineError):
    code = "parse_error"

    def __init__(self, message: str, *, line: int | None = None, stage: str | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message, stage=stage)
        self.line = line


class InventoryError(EngineError):
    code = "unknown_phoneme"

    def __init__(self, symbol: str, *, stage: str | None = None):
        super().__init__(f"symbol {symbol!r} is not in the phoneme inventory", stage=stage)
        self.symbol = symbol


class OOVError(EngineError):
    code = "out_of_vocabulary"

    def __init__(self, token: str, *, stage: str | None = None):
        super().__init__(f"token {token!r} is not in the lexicon", stage=stage)
        self.token = token


class UsageError(EngineError):
    code = "usage_error"


class TrainingError(EngineError):
    code = "training_error"


class VocabularyError(EngineError):
    code = "vocabulary_error"


class NoParseError(EngineError):
    code = "no_parse"


class CapacityError(EngineError):
    code = "capacity_error"


class DimensionError(EngineError):
    code = "dimension_mismatch"


class DivergenceError(EngineError):
    code = "divergence"


class RetrievalError(EngineError):
    code = "empty_case_base"


class DegeneratePriorError(EngineError):
    code = "degenerate_prior"


class AdaptationError(EngineError):
    code = "unresolved_placeholder"

    def __init__(self, placeholder: str, *, stage: str | None = None):
        super().__init__(f"placeholder {{{placeholder}}} cannot be resolved", stage=stage)
        self.placeholder = placeholder


class ModalityError(EngineError):
    code = "unsupported_modality"


class ReportError(EngineError):
    code = "incomplete_report"


class ConfigError(EngineError):
    code = "config_error"


class StartupError(EngineError):
    code = "startup_error"
