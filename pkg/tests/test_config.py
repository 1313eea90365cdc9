import pytest

import graminspect._auxiliary.warnings as aw
from graminspect.cli.Config import load_config, read_config


def _write(tmp_path, text, name="run.cfg"):
    filename = tmp_path / name
    filename.write_text(text, encoding="utf-8")
    return str(filename)


def test_empty_file_gives_the_paper_profile(tmp_path):
    config = load_config(_write(tmp_path, "# nothing here\n\n"), command="train")
    assert (config.batch_size, config.lr, config.epochs) == (32, 2e-5, 120)
    assert config.profile == "paper"
    assert config.gat_dims == (512, 1024)


def test_flags_beat_the_file(tmp_path):
    filename = _write(tmp_path, "lr = 1e-3\nepochs = 10\n")
    config = load_config(filename, {"lr": "5e-4", "epochs": None}, command="train")
    assert config.lr == 5e-4
    assert config.epochs == 10


def test_profile_from_the_file(tmp_path):
    filename = _write(tmp_path, "profile = toy\nvariant = C\ngat_dims = 8, 8\n")
    config = load_config(filename, command="train")
    assert config.profile == "toy"
    assert config.batch_size == 8 and config.lr == 1e-3
    assert config.gat_dims == (8, 8)
    model = config.model_config()
    assert model.variant == "C" and model.gat_dims == (8, 8)


def test_profile_flag_wins(tmp_path):
    filename = _write(tmp_path, "profile = toy\n")
    assert load_config(filename, {"profile": "paper"}).batch_size == 32


def test_unknown_key_is_named(tmp_path):
    filename = _write(tmp_path, "epochs = 3\nleraning_rate = 0.1\n")
    with pytest.raises(aw.ConfigError) as err:
        load_config(filename)
    assert err.value.msg == "unknown_key"
    assert "leraning_rate" in str(err.value)
    assert "line 2" in str(err.value)


def test_alias(tmp_path):
    assert read_config(_write(tmp_path, "learning_rate = 0.01\n")) == {"lr": 0.01}
    assert load_config(None, {"learning_rate": 0.02}).lr == 0.02


@pytest.mark.parametrize(
    "text, key",
    [
        ("epochs = many\n", "type_mismatch"),
        ("gat_dims = 4, x\n", "type_mismatch"),
        ("variant = D\n", "type_mismatch"),
        ("just some words\n", "bad_line"),
        ("= 3\n", "bad_line"),
    ],
)
def test_bad_values(tmp_path, text, key):
    with pytest.raises(aw.ConfigError) as err:
        load_config(_write(tmp_path, text))
    assert err.value.msg == key


def test_dropout_none(tmp_path):
    config = load_config(_write(tmp_path, "dropout = none\nvariant = C\n"))
    assert config.dropout is None
    assert config.train_config().dropout_for("C") == 0.1


def test_missing_path():
    config = load_config(None, {"corpus": "train.jsonl"}, command="train")
    with pytest.raises(aw.ConfigError) as err:
        config.require()
    assert err.value.msg == "missing_path"
    assert "out" in str(err.value)


def test_ensemble_config():
    config = load_config(None, {"theta1": 0.3, "tie_break": "votes"}, command="ensemble")
    ensemble = config.ensemble_config()
    assert ensemble.thetas == (0.3, 0.5, 0.5)
    assert ensemble.tie_break == "votes"
