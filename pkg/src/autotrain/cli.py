"""Command-line interface: lexicon/model building, evaluation, and sessions."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .errors import EngineError
from .harness import (
    emit_table,
    generate_suite,
    load_suite_config,
    run_report,
    train_backend,
)
from .netio import save_network
from .ngram import PruneConfig, load_model, prune_ngrams, save_model, train_ngram
from .phonemes import load_lexicon, text_to_phonemes
from .session import (
    load_session_config,
    open_session,
    process_utterance,
    response_line,
)


def _config_path(args) -> str:
    path = args.config or os.environ.get("AUTOTRAIN_CONFIG")
    if not path:
        raise EngineError("no config given: pass --config or set AUTOTRAIN_CONFIG")
    return path


def _cmd_build_lexicon(args) -> int:
    text = Path(args.file).read_text(encoding="utf-8")
    lexicon = load_lexicon(text)
    prons = sum(len(lexicon.pronunciations(w)) for w in lexicon.words)
    print(f"loaded {len(lexicon)} words, {prons} pronunciations")
    if args.out:
        lines = ["# normalized lexicon"]
        for word in lexicon.words:
            for pron in lexicon.pronunciations(word):
                lines.append(f"{word} {' '.join(pron.symbols)} {pron.weight}")
        Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
        print(f"wrote {args.out}")
    return 0


def _cmd_train_lm(args) -> int:
    lexicon = load_lexicon(Path(args.lexicon).read_text(encoding="utf-8"))
    corpus = []
    for line in Path(args.corpus).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        corpus.append(text_to_phonemes(line, lexicon))
    model = train_ngram(corpus, order=args.order, smoothing=args.smoothing)
    save_model(model, args.out)
    print(f"trained order-{args.order} model on {len(corpus)} utterances -> {args.out}")
    return 0


def _cmd_prune_lm(args) -> int:
    model = load_model(args.model)
    pruned = prune_ngrams(model, PruneConfig(threshold=args.threshold))
    out = args.out or args.model
    save_model(pruned, out)
    kept = sum(len(d) for d in pruned.tables.values())
    total = sum(len(d) for d in model.tables.values())
    print(f"kept {kept}/{total} entries at threshold {args.threshold} -> {out}")
    return 0


def _cmd_train_net(args) -> int:
    config = load_suite_config(args.suite)
    if args.seed is not None:
        config = type(config)(**{**config.__dict__, "seed": args.seed})
    suite = generate_suite(config)
    bundle = train_backend(suite, args.backend)
    net = getattr(bundle.translator, "net", None) or getattr(
        bundle.translator, "machine", None
    ) or getattr(bundle.translator, "model")
    save_network(net, args.out)
    print(f"trained {args.backend} backend on suite seed {suite.rng_seed} -> {args.out}")
    return 0


def _cmd_eval(args) -> int:
    config = load_suite_config(args.suite)
    if args.seed is not None:
        config = type(config)(**{**config.__dict__, "seed": args.seed})
    suite = generate_suite(config)
    report = run_report(suite)
    print(emit_table(report, args.format), end="")
    if args.out:
        prefix = Path(args.out)
        prefix.with_suffix(".csv").write_text(emit_table(report, "csv"), encoding="utf-8")
        prefix.with_suffix(".json").write_text(emit_table(report, "json"), encoding="utf-8")
        print(f"wrote {prefix.with_suffix('.csv')} and {prefix.with_suffix('.json')}")
    return 0


def _cmd_session(args) -> int:
    config = load_session_config(_config_path(args))
    if args.seed is not None:
        config = type(config)(**{**config.__dict__, "seed": args.seed})
    state = open_session(config)
    for line in sys.stdin:
        text = line.rstrip("\n")
        try:
            state, output = process_utterance(state, text)
            print(response_line(output, state.phase), flush=True)
        except EngineError as exc:
            doc = {"error_code": exc.code, "message": exc.message}
            if exc.stage:
                doc["stage"] = exc.stage
            print(json.dumps(doc, sort_keys=True, separators=(",", ":")), flush=True)
    return 0


def _cmd_serve(args) -> int:
    from .service import serve

    config = load_session_config(_config_path(args))
    if args.seed is not None:
        config = type(config)(**{**config.__dict__, "seed": args.seed})
    serve(config, args.bind)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="autotrain")
    parser.add_argument("--seed", type=int, default=None, help="override configured seeds")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-lexicon", help="validate and normalize a lexicon file")
    p.add_argument("file")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_build_lexicon)

    p = sub.add_parser("train-lm", help="train an n-gram model from a text corpus")
    p.add_argument("corpus")
    p.add_argument("--lexicon", required=True)
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--smoothing", type=float, default=1.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_train_lm)

    p = sub.add_parser("prune-lm", help="drop model entries below a threshold")
    p.add_argument("model")
    p.add_argument("--threshold", type=float, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_prune_lm)

    p = sub.add_parser("train-net", help="train a backend on a scenario suite")
    p.add_argument("suite")
    p.add_argument("--backend", required=True, choices=("hopfield", "perceptron", "boltzmann"))
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_train_net)

    p = sub.add_parser("eval", help="run the precision comparison on a suite")
    p.add_argument("--suite", required=True)
    p.add_argument("--format", choices=("table", "csv", "json"), default="table")
    p.add_argument("--out", default=None, help="path prefix for .csv/.json report files")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("session", help="interactive line mode: utterance in, JSON out")
    p.add_argument("--config", default=None)
    p.set_defaults(func=_cmd_session)

    p = sub.add_parser("serve", help="run the HTTP session service")
    p.add_argument("--config", default=None)
    p.add_argument("--bind", default="127.0.0.1:8743")
    p.set_defaults(func=_cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EngineError as exc:
        print(f"error [{exc.code}]: {exc.message}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
