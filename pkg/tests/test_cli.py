from __future__ import annotations

import json
import subprocess
import sys

from autotrain.cli import main
from autotrain.ngram import load_model
from autotrain.session import SessionEngine, load_session_config, process_utterance, response_line


def run_cli(args, stdin: str = "", env_extra=None) -> subprocess.CompletedProcess:
    import os

    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "autotrain.cli", *args],
        input=stdin,
        capture_output=True,
        text=True,
        env=env,
        timeout=300,
    )


class TestBuildLexicon:
    def test_reports_counts(self, data_dir):
        result = run_cli(["build-lexicon", str(data_dir / "lexicon.txt")])
        assert result.returncode == 0
        assert "26 words" in result.stdout

    def test_bad_file_exits_nonzero(self, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("calm K AA ZZ\n", encoding="utf-8")
        result = run_cli(["build-lexicon", str(bad)])
        assert result.returncode == 2
        assert "unknown_phoneme" in result.stderr


class TestModelCommands:
    def test_train_and_prune(self, data_dir, tmp_path):
        model_path = tmp_path / "model.json"
        result = run_cli(
            [
                "train-lm",
                str(data_dir / "corpus.txt"),
                "--lexicon",
                str(data_dir / "lexicon.txt"),
                "--order",
                "2",
                "--smoothing",
                "1.0",
                "--out",
                str(model_path),
            ]
        )
        assert result.returncode == 0, result.stderr
        model = load_model(model_path)
        assert model.order == 2

        pruned_path = tmp_path / "pruned.json"
        result = run_cli(
            ["prune-lm", str(model_path), "--threshold", "0.1", "--out", str(pruned_path)]
        )
        assert result.returncode == 0, result.stderr
        pruned = load_model(pruned_path)
        assert all(min(d.values()) >= 0.1 for d in pruned.tables.values())


class TestEval:
    def test_eval_writes_consistent_reports(self, data_dir, tmp_path):
        suite = tmp_path / "suite.json"
        suite.write_text(
            json.dumps(
                {
                    "seed": 5,
                    "lexicon_size": 6,
                    "utterance_count": 4,
                    "noise": {"substitute_prob": 0.1, "rng_seed": 5},
                }
            ),
            encoding="utf-8",
        )
        out_prefix = tmp_path / "report"
        result = run_cli(
            ["eval", "--suite", str(suite), "--format", "table", "--out", str(out_prefix)]
        )
        assert result.returncode == 0, result.stderr
        assert "hopfield" in result.stdout and "not reproducible" in result.stdout
        csv_text = (tmp_path / "report.csv").read_text(encoding="utf-8")
        json_doc = json.loads((tmp_path / "report.json").read_text(encoding="utf-8"))
        for row in json_doc["rows"]:
            assert f"{row['backend']},{row['nlp_precision']:.4f}" in csv_text


class TestTrainNet:
    def test_trains_and_saves_backend(self, tmp_path):
        suite = tmp_path / "suite.json"
        suite.write_text(
            json.dumps({"seed": 5, "lexicon_size": 6, "utterance_count": 4}),
            encoding="utf-8",
        )
        out = tmp_path / "net.json"
        result = run_cli(["train-net", str(suite), "--backend", "hopfield", "--out", str(out)])
        assert result.returncode == 0, result.stderr
        assert json.loads(out.read_text(encoding="utf-8"))["kind"] == "hopfield"


class TestSessionLineMode:
    def test_line_mode_matches_library(self, data_dir):
        script = (data_dir / "script.txt").read_text(encoding="utf-8")
        result = run_cli(
            ["session", "--config", str(data_dir / "session.json")], stdin=script
        )
        assert result.returncode == 0, result.stderr
        cli_lines = result.stdout.strip().splitlines()

        config = load_session_config(data_dir / "session.json")
        state = SessionEngine(config).open()
        expected = []
        for utterance in script.splitlines():
            state, output = process_utterance(state, utterance)
            expected.append(response_line(output, state.phase))
        assert cli_lines == expected

    def test_config_from_environment(self, data_dir):
        result = run_cli(
            ["session"],
            stdin="i am ready\n",
            env_extra={"AUTOTRAIN_CONFIG": str(data_dir / "session.json")},
        )
        assert result.returncode == 0, result.stderr
        assert json.loads(result.stdout.strip())["phase"] == "induction"

    def test_missing_config_is_error(self):
        import os

        env = {k: v for k, v in os.environ.items() if k != "AUTOTRAIN_CONFIG"}
        result = subprocess.run(
            [sys.executable, "-m", "autotrain.cli", "session"],
            input="",
            capture_output=True,
            text=True,
            env=env,
            timeout=60,
        )
        assert result.returncode == 2


class TestMainEntry:
    def test_main_callable_directly(self, data_dir, capsys):
        code = main(["build-lexicon", str(data_dir / "lexicon.txt")])
        assert code == 0
        assert "words" in capsys.readouterr().out
