import csv
import json

import pytest

from pipedefect.cli import main

BOX_TEXT = (
    "Defects: Very Frequently, there is a leakage in pipe at 10 feet away "
    "from pipe installation"
)

CONFIG = """\
[paths]
lexicon = lexicon.tsv
model = tagger.model
loss_log = tagger.loss.txt
corpus_dir = corpus
gold_file = gold.tsv
output_dir = out

[run]
seed = 11
split_ratio = 0.8

[hyperparameters]
word_dim = 16
dict_dim = 8
hidden_dim = 12
epochs = 3
batch_size = 20
"""


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    """A working directory with lexicon, 30-document corpus, and model built."""
    root = tmp_path_factory.mktemp("cli")
    config = root / "config.ini"
    config.write_text(CONFIG)
    argv = ["--config", str(config)]
    assert main([*argv, "build-lexicon"]) == 0
    assert main([*argv, "generate", "--n", "30"]) == 0
    assert main([*argv, "train"]) == 0
    return root, argv


class TestBuildLexicon:
    def test_rebuild_is_byte_identical(self, workspace):
        root, argv = workspace
        first = (root / "lexicon.tsv").read_bytes()
        assert main([*argv, "build-lexicon"]) == 0
        assert (root / "lexicon.tsv").read_bytes() == first


class TestGenerate:
    def test_files_written(self, workspace):
        root, _ = workspace
        assert len(list((root / "corpus").glob("*.txt"))) == 30
        assert (root / "gold.tsv").exists()
        assert len((root / "gold.tsv").read_text().splitlines()) == 30

    def test_nonpositive_n_rejected(self, workspace):
        _, argv = workspace
        assert main([*argv, "generate", "--n", "0"]) == 2


class TestTrain:
    def test_model_and_loss_log(self, workspace):
        root, _ = workspace
        assert (root / "tagger.model").exists()
        lines = (root / "tagger.loss.txt").read_text().splitlines()
        assert len(lines) == 3  # one entry per configured epoch
        losses = [float(line.split("\t")[1]) for line in lines]
        assert losses[-1] < losses[0]


class TestRate:
    def test_rate_corpus_with_dict_tagger(self, workspace):
        root, argv = workspace
        assert main([*argv, "rate", str(root / "corpus")]) == 0
        with open(root / "out" / "summary.csv", newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["doc_id", "rating"]
        assert len(rows) == 31
        assert len(list((root / "out" / "reports").glob("*.json"))) == 30

    def test_rate_with_bilstm_tagger(self, workspace):
        root, argv = workspace
        assert main([*argv, "rate", str(root / "corpus"), "--tagger", "bilstm"]) == 0

    def test_rate_box_example(self, workspace):
        root, argv = workspace
        box = root / "box1.txt"
        box.write_text(BOX_TEXT)
        assert main([*argv, "rate", str(box)]) == 0
        payload = json.loads((root / "out" / "reports" / "box1.json").read_text())
        assert payload["rating"] == 5
        assert payload["weights"] == {"frequencies": 0.99, "location": 0.9, "defect": 0.8}

    def test_rate_empty_directory(self, workspace, tmp_path):
        _, argv = workspace
        empty = tmp_path / "none"
        empty.mkdir()
        assert main([*argv, "rate", str(empty)]) == 0

    def test_unreadable_document_records_error(self, workspace, tmp_path):
        root, argv = workspace
        bad = tmp_path / "bad.txt"
        bad.write_text("   ")
        assert main([*argv, "rate", str(bad)]) == 1  # every input failed
        payload = json.loads((root / "out" / "reports" / "bad.json").read_text())
        assert "error" in payload

    def test_missing_input_path(self, workspace, tmp_path):
        _, argv = workspace
        assert main([*argv, "rate", str(tmp_path / "ghost.txt")]) == 2


@pytest.fixture(scope="module")
def eval_workspace(workspace):
    """Separate output directory so rating reports from other tests do not
    leak into the evaluation set."""
    root, _ = workspace
    config = root / "config_eval.ini"
    config.write_text(CONFIG.replace("output_dir = out", "output_dir = out_eval"))
    argv = ["--config", str(config)]
    assert main([*argv, "rate", str(root / "corpus")]) == 0
    return root, argv


class TestEvaluate:
    def test_dict_predictions_are_perfect(self, eval_workspace):
        root, argv = eval_workspace
        out = root / "out_eval"
        assert main([*argv, "evaluate", str(out), str(root / "gold.tsv")]) == 0
        payload = json.loads((out / "entity_metrics.json").read_text())
        by_label = {r["label"]: r for r in payload["rows"]}
        for label in ("Defects", "Location of defect", "Frequency of defects"):
            assert by_label[label]["accuracy"] == 1.0
        rating_rows = json.loads((out / "rating_metrics.json").read_text())["rows"]
        assert rating_rows[-1]["label"] == "Overall"
        assert rating_rows[-1]["accuracy"] == 1.0

    def test_prediction_without_gold_exits_2(self, eval_workspace, tmp_path):
        root, argv = eval_workspace
        gold = tmp_path / "gold.tsv"
        gold.write_text("pipe0000\t1\t-\tsynthetic\n")  # misses the other 29 ids
        assert main([*argv, "evaluate", str(root / "out_eval"), str(gold)]) == 2


class TestConfigHandling:
    def test_missing_config_file(self, tmp_path):
        assert main(["--config", str(tmp_path / "nope.ini"), "build-lexicon"]) == 2

    def test_seed_flag_overrides_config(self, tmp_path):
        config = tmp_path / "config.ini"
        config.write_text(CONFIG)
        argv = ["--config", str(config)]
        assert main([*argv, "build-lexicon"]) == 0
        assert main([*argv, "--seed", "77", "generate", "--n", "4"]) == 0
        first = sorted(p.read_text() for p in (tmp_path / "corpus").glob("*.txt"))
        assert main([*argv, "--seed", "78", "generate", "--n", "4"]) == 0
        second = sorted(p.read_text() for p in (tmp_path / "corpus").glob("*.txt"))
        assert first != second
