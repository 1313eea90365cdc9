import json
import os

import pytest

import graminspect.defaults as defaults
from graminspect.cli import main
from graminspect.main import read_corpus, read_predictions
from graminspect.Readers import write_manifest

SMALL = "profile = toy\nembedding_dim = 6\ngat_dims = 4, 3\ngat_heads = 2, 2\nlstm_hidden = 3\nbatch_size = 4\nepochs = 1\n"


@pytest.fixture(scope="module")
def data(tmp_path_factory):
    out = tmp_path_factory.mktemp("synth")
    assert main(["synth", "--out", str(out), "--n", "16", "--seed", "7"]) == 0
    return out


def _runlog(path):
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def test_synth_writes_a_complete_dataset(data):
    assert {"corpus.jsonl", "corpus.dep", "lexicon.txt", "run.runlog.json"} <= set(os.listdir(data))
    assert len(read_corpus(str(data / "corpus.jsonl"))) == 16
    log = _runlog(data / "run.runlog.json")
    assert set(log) == {"command", "config", "seed", "inputs", "version"}
    assert log["command"] == "synth" and log["seed"] == 7
    assert log["version"] == defaults.version


def test_stats(data, capsys):
    assert main(["stats", "--corpus", str(data / "corpus.jsonl")]) == 0
    assert "R" in capsys.readouterr().out


def test_graph_dump(data, tmp_path):
    out = tmp_path / "graphs.tsv"
    args = ["graph", "--variant", "A", "--corpus", str(data / "corpus.jsonl"), "--parses", str(data / "corpus.dep"), "--out", str(out)]
    assert main(args) == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "sid\ti\tj\tprovenance"
    assert any(line.endswith("\tdependency") for line in lines[1:])
    log = _runlog(str(out) + ".runlog.json")
    assert set(log["inputs"]) == {str(data / "corpus.jsonl"), str(data / "corpus.dep")}
    assert all(len(digest) == 64 for digest in log["inputs"].values())


def test_train_predict_ensemble_evaluate(data, tmp_path, capsys):
    config = tmp_path / "small.cfg"
    config.write_text(SMALL, encoding="utf-8")
    corpus, lexicon = str(data / "corpus.jsonl"), str(data / "lexicon.txt")
    ckpt = str(tmp_path / "model.ckpt")
    train = ["train", "--config", str(config), "--variant", "C", "--corpus", corpus, "--lexicon", lexicon, "--seed", "3", "--out", ckpt]
    assert main(train) == 0
    assert os.path.isfile(ckpt + ".history.tsv")
    assert _runlog(ckpt + ".runlog.json")["config"]["embedding_dim"] == 6

    pred = str(tmp_path / "pred.tsv")
    assert main(["predict", "--checkpoint", ckpt, "--corpus", corpus, "--lexicon", lexicon, "--out", pred]) == 0
    predictions = read_predictions(pred)
    assert predictions.ids() == read_corpus(corpus).ids()

    manifest = str(tmp_path / "models.tsv")
    write_manifest([("pred.tsv", False), ("pred.tsv", True)], manifest)
    ens = str(tmp_path / "ens.tsv")
    assert main(["ensemble", "--models", manifest, "--theta1", "0.5", "--theta2", "0.4", "--theta3", "0.5", "--out", ens]) == 0
    # a model voting with itself reproduces its own spans
    assert read_predictions(ens) == read_predictions(pred, model_id="ensemble")

    capsys.readouterr()
    assert main(["tune", "--models", manifest, "--gold", corpus, "--out", str(tmp_path / "tune.tsv")]) == 0
    assert "theta1 = " in capsys.readouterr().out

    assert main(["evaluate", "--gold", corpus, "--pred", ens]) == 0
    assert "Identification" in capsys.readouterr().out


def test_train_and_predict_are_reproducible(data, tmp_path):
    config = tmp_path / "small.cfg"
    config.write_text(SMALL, encoding="utf-8")
    corpus, parses = str(data / "corpus.jsonl"), str(data / "corpus.dep")
    outputs = []
    for run in ("first", "second"):
        directory = tmp_path / run
        directory.mkdir()
        ckpt, pred = str(directory / "model.ckpt"), str(directory / "pred.tsv")
        train = ["train", "--config", str(config), "--variant", "A", "--corpus", corpus, "--parses", parses, "--epochs", "2", "--seed", "7", "--out", ckpt]
        assert main(train) == 0
        assert main(["predict", "--checkpoint", ckpt, "--corpus", corpus, "--parses", parses, "--out", pred]) == 0
        with open(ckpt, "rb") as f, open(pred, "rb") as g:
            outputs.append((f.read(), g.read()))
    assert outputs[0][0] == outputs[1][0]
    assert outputs[0][1] == outputs[1][1]


def test_exit_codes(data, tmp_path, capsys):
    corpus = str(data / "corpus.jsonl")
    # missing required path
    assert main(["stats"]) == 2
    assert main(["evaluate", "--gold", corpus]) == 2
    # unreadable input
    assert main(["stats", "--corpus", str(tmp_path / "missing.jsonl")]) == 3
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"id": "x", "text": "ab", "errors": [{"start": 1, "end": 9, "type": "R"}]}\n', encoding="utf-8")
    assert main(["stats", "--corpus", str(bad)]) == 3
    # checkpoint integrity
    broken = tmp_path / "broken.ckpt"
    broken.write_bytes(b"not a checkpoint at all")
    assert main(["predict", "--checkpoint", str(broken), "--corpus", corpus, "--out", str(tmp_path / "p.tsv")]) == 5
    # config errors
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("leraning_rate = 0.1\n", encoding="utf-8")
    assert main(["stats", "--config", str(cfg), "--corpus", corpus]) == 2
    assert "leraning_rate" in capsys.readouterr().err


def test_usage_errors():
    with pytest.raises(SystemExit) as err:
        main(["train", "--epochs", "many"])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        main([])
    assert err.value.code == 2
