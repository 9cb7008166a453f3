"""Interactive guided-relaxation dialogue engine.

Pipeline: text -> phonemes -> (seeded noise) -> n-gram decode -> bipolar
encoding -> associative translator (Hopfield / Boltzmann / Perceptron) ->
case-based inference -> rendered output. Everything is deterministic given
the configured seeds.
"""

from .errors import EngineError
from .phonemes import (
    BOUNDARY,
    INVENTORY,
    Lexicon,
    NoiseSpec,
    Phoneme,
    PhonemeSequence,
    apply_noise,
    load_lexicon,
    text_to_phonemes,
)
from .ngram import (
    DecodeResult,
    DecoderConfig,
    NGramModel,
    PruneConfig,
    decode_phonemes,
    load_model,
    lookup_prob,
    prune_ngrams,
    save_model,
    sequence_logprob,
    train_ngram,
)
from .patterns import BipolarPattern, decode_pattern, encode_pattern, pattern_dimension
from .hopfield import HopfieldNet, hopfield_energy, hopfield_recall, hopfield_store
from .boltzmann import (
    AnnealSchedule,
    BoltzmannMachine,
    boltzmann_settle,
    boltzmann_train,
    default_schedule,
    initialized_machine,
)
from .perceptron import Perceptron, perceptron_predict, perceptron_train
from .readout import FuzzyReadout, fuzzy_readout
from .cbr import (
    Case,
    CaseBase,
    InferenceConfig,
    RenderedOutput,
    ResponsePosterior,
    adapt,
    bayesian_correlate,
    drive_output,
    infer,
    load_casebase,
    retrieve,
)

__version__ = "0.1.0"
