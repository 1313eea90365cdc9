import numpy as np
import pytest
from conftest import quick_schedule, small_model

import graminspect._auxiliary.warnings as aw
from graminspect.Tagger import Checkpoint, FrozenEmbeddingTable, Trainer, load_checkpoint, predict, save_checkpoint, train


@pytest.fixture(scope="module")
def trained(synthetic, graphs_c):
    return train(synthetic.corpus, quick_schedule(), small_model("C"), graphs=graphs_c)


def test_training_history(trained):
    checkpoint, history = trained
    assert list(history.columns) == ["epoch", "loss"]
    assert list(history["epoch"]) == [1, 2]
    assert np.all(np.isfinite(history["loss"]))
    assert checkpoint.epoch == 2 and checkpoint.seed == 3


def test_training_is_reproducible(synthetic, graphs_c, trained):
    again, _ = train(synthetic.corpus, quick_schedule(), small_model("C"), graphs=graphs_c)
    assert again.to_bytes() == trained[0].to_bytes()
    other, _ = train(synthetic.corpus, quick_schedule(seed=4), small_model("C"), graphs=graphs_c)
    assert other.to_bytes() != trained[0].to_bytes()


def test_validation_tracks_levels(synthetic, graphs_c):
    trainer = Trainer(quick_schedule(epochs=2))
    trainer.link(synthetic.corpus, graphs=graphs_c)
    trainer.link_validation(synthetic.corpus, graphs=graphs_c)
    checkpoint = trainer.pipe(small_model("C"))
    history = trainer.history()
    assert list(history.columns) == ["epoch", "loss", "detection", "identification", "position"]
    best = int(history["epoch"][history["identification"].to_numpy().argmax()])
    assert checkpoint.epoch == best


def test_empty_corpus_is_rejected(tiny_corpus):
    with pytest.raises(aw.TaggerError) as err:
        Trainer().link(tiny_corpus.subset([]))
    assert err.value.msg == "empty_corpus"


def test_checkpoint_bytes_are_stable(tmp_path, trained):
    checkpoint, _ = trained
    first, second = str(tmp_path / "a.ckpt"), str(tmp_path / "b.ckpt")
    save_checkpoint(checkpoint, first)
    save_checkpoint(load_checkpoint(first), second)
    with open(first, "rb") as a, open(second, "rb") as b:
        raw = a.read()
        assert raw == b.read()
    assert raw.startswith(b"GRAMINSPECT-CKPT-1\nmanifest-bytes ")


def test_checkpoint_round_trip_predicts_identically(tmp_path, synthetic, graphs_c, trained):
    checkpoint, _ = trained
    filename = str(tmp_path / "m.ckpt")
    save_checkpoint(checkpoint, filename)
    loaded = load_checkpoint(filename, fingerprint=checkpoint.fingerprint())
    assert isinstance(loaded, Checkpoint)
    before = predict(checkpoint, synthetic.corpus, graphs_c)
    after = predict(loaded, synthetic.corpus, graphs_c, config=small_model("C"))
    assert before == after
    assert after.is_lgn


def _corrupt(tmp_path, checkpoint, edit):
    raw = bytearray(checkpoint.to_bytes())
    filename = str(tmp_path / "bad.ckpt")
    with open(filename, "wb") as f:
        f.write(edit(raw))
    return filename


def test_checkpoint_integrity(tmp_path, trained):
    checkpoint, _ = trained

    def flip_last(raw):
        raw[-1] ^= 0xFF
        return bytes(raw)

    cases = [
        (lambda raw: b"GRAMINSPECT-CKPT-9" + bytes(raw[len("GRAMINSPECT-CKPT-1") :]), "bad_magic"),
        (lambda raw: bytes(raw[:-8]), "truncated"),
        (lambda raw: bytes(raw[:40]), "truncated"),
        (flip_last, "checksum"),
    ]
    for edit, key in cases:
        with pytest.raises(aw.CheckpointError) as err:
            load_checkpoint(_corrupt(tmp_path, checkpoint, edit))
        assert err.value.msg == key


def test_fingerprint_mismatch(tmp_path, trained):
    checkpoint, _ = trained
    filename = str(tmp_path / "m.ckpt")
    save_checkpoint(checkpoint, filename)
    with pytest.raises(aw.CheckpointError) as err:
        load_checkpoint(filename, fingerprint="0" * 64)
    assert err.value.msg == "fingerprint"
    with pytest.raises(aw.TaggerError) as err:
        checkpoint.check(small_model("C", lstm_hidden=7, gat_dims=(4, 4)))
    assert err.value.msg == "fingerprint_mismatch"


def test_frozen_table(tmp_path, synthetic):
    table = FrozenEmbeddingTable.simulate(synthetic.corpus, 5, seed=1)
    assert FrozenEmbeddingTable.simulate(synthetic.corpus, 5, seed=1).get("syn-00001").tolist() == table.get("syn-00001").tolist()
    filename = str(tmp_path / "frozen.bin")
    table.save(filename)
    loaded = FrozenEmbeddingTable.load(filename)
    assert loaded.ids() == table.ids()
    assert all(np.array_equal(loaded.get(sid), table.get(sid)) for sid in table.ids())

    with pytest.raises(aw.ReaderError) as err:
        table.get("missing")
    assert err.value.msg == "missing_row"
    assert np.all(table.get("missing", n=3, strict=False) == 0)

    with open(filename, "rb") as f:
        raw = f.read()
    with open(filename, "wb") as f:
        f.write(raw[:-10])
    with pytest.raises(aw.ReaderError) as err:
        FrozenEmbeddingTable.load(filename)
    assert err.value.msg == "truncated"
