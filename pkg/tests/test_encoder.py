import numpy as np
import pytest

import graminspect._auxiliary.warnings as aw
from graminspect.Layers import Encoder, EncoderConfig, Vocab
from graminspect.Layers.Encoder import streams
from graminspect.numerics import ParamStore, finite_diff_check


def test_vocab(tiny_corpus):
    vocab = Vocab.build(tiny_corpus)
    assert vocab.to_list() == sorted(vocab.to_list())
    assert len(vocab) == len(vocab.to_list()) + 1
    ids = vocab.encode("我们?")
    assert ids[-1] == Vocab.UNK and ids[0] > 0
    assert Vocab.build(tiny_corpus.subset(["s3", "s2", "s1"])) == vocab


def test_streams():
    assert streams(5, 128) == [(0, 5)]
    assert streams(300, 128) == [(0, 128), (128, 256), (256, 300)]


def test_encoder_config_validation():
    with pytest.raises(aw.EncoderError):
        EncoderConfig(10, kind="bert")
    with pytest.raises(aw.EncoderError) as err:
        EncoderConfig(10, embedding_dim=10, kind="transformer", layers=1, heads=3)
    assert err.value.msg == "bad_heads"
    assert EncoderConfig(10, kind="embedding").depth == 0


def test_embedding_encoder_is_a_lookup(rng):
    encoder = Encoder(EncoderConfig(5, embedding_dim=3, kind="embedding"))
    store = ParamStore()
    encoder.init(store, rng, 0.1)
    outputs, trace = encoder.forward(store, [1, 4, 1])
    assert len(outputs) == 1
    np.testing.assert_array_equal(outputs[0], store["enc.emb"][[1, 4, 1]])
    grads = {}
    encoder.backward(store, trace, {0: np.ones((3, 3))}, grads)
    np.testing.assert_allclose(grads["enc.emb"][1], 2.0)
    assert np.allclose(grads["enc.emb"][0], 0.0)


@pytest.mark.parametrize("max_len", [16, 3])
def test_transformer_gradients(rng, max_len):
    config = EncoderConfig(6, embedding_dim=4, kind="transformer", layers=2, heads=2, ffn=5, max_len=max_len)
    encoder = Encoder(config)
    store = ParamStore()
    encoder.init(store, rng, 0.4)
    ids = np.array([1, 2, 3, 5, 2])
    d1, d2 = rng.normal(size=(5, 4)), rng.normal(size=(5, 4))

    def loss(_):
        outputs, _trace = encoder.forward(store, ids)
        return float(np.sum(outputs[1] * d1) + np.sum(outputs[2] * d2))

    outputs, trace = encoder.forward(store, ids)
    assert [o.shape for o in outputs] == [(5, 4)] * 3
    grads = {}
    encoder.backward(store, trace, {1: d1, 2: d2}, grads)
    assert set(grads) == set(encoder.param_names())
    params = {name: store[name] for name in grads}
    report = finite_diff_check(loss, params, grads, max_coords=8, rng=rng)
    assert report.passed, str(report)
