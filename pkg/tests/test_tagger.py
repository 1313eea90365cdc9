import numpy as np
import pytest
from conftest import small_model

import graminspect._auxiliary.warnings as aw
from graminspect.Layers import Vocab
from graminspect.main import NUM_LABELS
from graminspect.numerics import finite_diff_check, make_rng
from graminspect.Tagger import FrozenEmbeddingTable, ModelConfig, Tagger, TrainConfig


def _tagger(corpus, config, seed=0):
    return Tagger(config, Vocab.build(corpus)).init(make_rng(seed))


def _inputs(variant, sentence, graphs_a, graphs_c, frozen):
    if variant == "A":
        return graphs_a[sentence.id], None
    if variant == "C":
        return graphs_c[sentence.id], None
    return None, frozen.get(sentence.id)


def _gradcheck(tagger, sentence, graph, row):
    grads = {}
    tagger.loss(sentence, graph, row, grads=grads)
    assert set(grads) <= set(tagger.store.names())
    params = {name: tagger.store[name] for name in grads}
    report = finite_diff_check(lambda _: tagger.loss(sentence, graph, row), params, grads, max_coords=6, rng=make_rng(1))
    assert report.passed, str(report)


@pytest.mark.parametrize(
    "variant, overrides",
    [
        ("A", {}),
        ("A", {"concat_gat_layer": 1}),
        ("B", {}),
        ("C", {}),
        ("A", {"encoder_kind": "transformer", "encoder_layers": 1, "encoder_heads": 2, "encoder_ffn": 5}),
        ("C", {"encoder_kind": "transformer", "encoder_layers": 2, "encoder_heads": 2, "encoder_ffn": 5, "encoder_feed_layer": 1}),
    ],
)
def test_pipeline_gradients(synthetic, graphs_a, graphs_c, variant, overrides):
    corpus = synthetic.corpus
    tagger = _tagger(corpus, small_model(variant, init_scale=0.5, **overrides))
    frozen = FrozenEmbeddingTable.simulate(corpus, 4, seed=2) if variant == "B" else None
    sentence = next(s for s in corpus if s.gold)
    graph, row = _inputs(variant, sentence, graphs_a, graphs_c, frozen)
    _gradcheck(tagger, sentence, graph, row)


def test_forward_shapes(synthetic, graphs_a):
    sentence = synthetic.corpus[0]
    tagger = _tagger(synthetic.corpus, small_model("A"))
    emissions, trace = tagger.forward(sentence, graphs_a[sentence.id])
    assert emissions.shape == (sentence.n, NUM_LABELS)
    assert trace.concat.shape == (sentence.n, 6 + 3)
    assert [o.shape[1] for o in trace.gat_outputs] == [8, 3]


def test_variant_b_starts_without_frozen_influence(synthetic):
    corpus = synthetic.corpus
    tagger = _tagger(corpus, small_model("B"))
    sentence = corpus[0]
    frozen = np.random.default_rng(0).normal(size=(sentence.n, 4))
    first, _ = tagger.forward(sentence, frozen=frozen)
    second, _ = tagger.forward(sentence, frozen=frozen * 10)
    np.testing.assert_allclose(first, second)


def test_missing_inputs_are_rejected(synthetic):
    sentence = synthetic.corpus[0]
    for variant in ("A", "B", "C"):
        tagger = _tagger(synthetic.corpus, small_model(variant))
        with pytest.raises(aw.TaggerError) as err:
            tagger.forward(sentence)
        assert err.value.msg == "missing_input"
        assert sentence.id in str(err.value)


def test_stale_trace_is_rejected(synthetic, graphs_c):
    sentence = synthetic.corpus[0]
    tagger = _tagger(synthetic.corpus, small_model("C"))
    emissions, trace = tagger.forward(sentence, graphs_c[sentence.id])
    tagger.store.bump()
    with pytest.raises(aw.TaggerError) as err:
        tagger.backward(trace, np.ones_like(emissions))
    assert err.value.msg == "stale_trace"


def test_dropout_is_seeded(synthetic, graphs_a):
    sentence = synthetic.corpus[0]
    graph = graphs_a[sentence.id]
    tagger = _tagger(synthetic.corpus, small_model("A"))
    plain, _ = tagger.forward(sentence, graph)
    first, _ = tagger.forward(sentence, graph, rng=make_rng(4), dropout=0.3)
    second, _ = tagger.forward(sentence, graph, rng=make_rng(4), dropout=0.3)
    np.testing.assert_array_equal(first, second)
    assert not np.allclose(plain, first)
    assert np.array_equal(plain, tagger.forward(sentence, graph, rng=make_rng(4), dropout=0.0)[0])


def test_attention_of_a_tagger(synthetic, graphs_c):
    sentence = synthetic.corpus[1]
    graph = graphs_c[sentence.id]
    tagger = _tagger(synthetic.corpus, small_model("C"))
    alpha = tagger.attention(sentence, graph, layer=2, head=1)
    assert alpha.shape == (sentence.n, sentence.n)
    assert np.allclose(alpha.sum(axis=1), 1.0)
    assert np.all(alpha[~graph.adjacency()] == 0)
    with pytest.raises(aw.TaggerError) as err:
        tagger.attention(sentence, graph, layer=3)
    assert err.value.msg == "bad_layer"


def test_predict_returns_decoded_spans(synthetic, graphs_a):
    sentence = synthetic.corpus[0]
    tagger = _tagger(synthetic.corpus, small_model("A"))
    emissions, _ = tagger.forward(sentence, graphs_a[sentence.id])
    tags = tagger.decode(emissions)
    assert len(tags) == sentence.n
    spans = tagger.predict(sentence, graphs_a[sentence.id])
    assert all(1 <= s.start <= s.end <= sentence.n for s in spans)


def test_model_config_validation():
    with pytest.raises(aw.TaggerError) as err:
        ModelConfig(variant="D")
    assert err.value.msg == "unknown_variant"
    with pytest.raises(aw.TaggerError):
        ModelConfig(variant="B", frozen_dim=0)
    with pytest.raises(aw.TaggerError) as err:
        ModelConfig(variant="A", gat_dims=(4, 4), gat_heads=(2, 2), concat_gat_layer=3)
    assert err.value.msg == "bad_layer"
    with pytest.raises(aw.TaggerError):
        TrainConfig(objective="accuracy")


def test_profiles():
    paper = TrainConfig.from_profile("paper")
    assert (paper.batch_size, paper.lr, paper.epochs) == (32, 2e-5, 120)
    toy = ModelConfig.from_profile("toy", "C")
    assert (toy.embedding_dim, toy.gat_dims, toy.gat_heads) == (32, (16, 16), (2, 2))
    assert TrainConfig(dropout=None).dropout_for("C") == 0.1


def test_func_api_holds_only_tagger_wrappers():
    from graminspect.Tagger import func_api as tagger_api

    public = {name for name, value in vars(tagger_api).items() if callable(value) and getattr(value, "__module__", None) == tagger_api.__name__}
    assert public == {"model_forward", "train", "predict"}
    assert not hasattr(tagger_api, "bilstm_forward")
