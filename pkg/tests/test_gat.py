import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import graminspect._auxiliary.warnings as aw
from graminspect.Graphs import CharGraph
from graminspect.Layers import GatLayer, GatLayerParams, GatStack, gat_attention, gat_backward, gat_forward
from graminspect.numerics import ParamStore, finite_diff_check, make_rng


def _random_adjacency(rng, n, p=0.4):
    upper = np.triu(rng.random((n, n)) < p, 1)
    adj = upper | upper.T
    np.fill_diagonal(adj, True)
    return adj


def _params(rng, heads=2, out_dim=3, in_dim=4, **kwargs):
    return GatLayerParams(rng.normal(size=(heads, out_dim, in_dim)), rng.normal(size=(heads, 2 * out_dim)), **kwargs)


@given(st.integers(1, 8), st.integers(0, 2**16))
@settings(max_examples=30, deadline=None)
def test_attention_rows_are_distributions(n, seed):
    rng = make_rng(seed)
    adj = _random_adjacency(rng, n)
    params = _params(rng)
    f = rng.normal(size=(n, 4))
    for head in range(params.heads):
        alpha = gat_attention(f, adj, params, head)
        assert np.allclose(alpha.sum(axis=1), 1.0)
        assert np.all(alpha[~adj] == 0.0)
        assert np.all(alpha[adj] > 0.0)


def test_single_node_attends_to_itself(rng):
    params = _params(rng)
    alpha = gat_attention(rng.normal(size=(1, 4)), CharGraph(1), params)
    assert alpha.shape == (1, 1) and alpha[0, 0] == 1.0


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("mode", ["concat", "average"])
def test_permutation_equivariance(seed, mode):
    rng = make_rng(seed)
    n = 6
    adj = _random_adjacency(rng, n)
    params = _params(rng, mode=mode)
    f = rng.normal(size=(n, 4))
    perm = rng.permutation(n)
    out, _ = gat_forward(f, adj, params)
    permuted, _ = gat_forward(f[perm], adj[np.ix_(perm, perm)], params)
    assert np.allclose(out[perm], permuted)
    assert out.shape == (n, params.width)


def test_average_mode_matches_dense_evaluation(rng):
    n, slope = 5, 0.2
    adj = _random_adjacency(rng, n)
    params = _params(rng, heads=3, mode="average", activation="identity", slope=slope)
    f = rng.normal(size=(n, 4))
    out, trace = gat_forward(f, adj, params)

    expected = np.zeros((n, params.out_dim))
    for m in range(params.heads):
        z = f @ params.W[m].T
        for i in range(n):
            scores = {}
            for j in range(n):
                if adj[i, j]:
                    e = params.a[m] @ np.concatenate([z[i], z[j]])
                    scores[j] = e if e >= 0 else slope * e
            top = max(scores.values())
            weights = {j: np.exp(s - top) for j, s in scores.items()}
            total = sum(weights.values())
            expected[i] += sum(w / total * z[j] for j, w in weights.items()) / params.heads
    assert np.allclose(out, expected, atol=1e-12)
    assert len(trace.alpha) == 3


@pytest.mark.parametrize("seed", range(7))
@pytest.mark.parametrize("mode, activation", [("concat", "elu"), ("average", "identity"), ("concat", "identity")])
def test_gat_gradients(seed, mode, activation):
    rng = make_rng(seed)
    n = 2 + seed % 5
    adj = _random_adjacency(rng, n, p=0.5)
    base = _params(rng, mode=mode, activation=activation)
    upstream = rng.normal(size=(n, base.width))
    values = {"f": rng.normal(size=(n, 4)), "W": base.W.copy(), "a": base.a.copy()}

    def loss(p):
        params = GatLayerParams(p["W"], p["a"], activation=activation, mode=mode)
        return float(np.sum(gat_forward(p["f"], adj, params)[0] * upstream))

    _, trace = gat_forward(values["f"], adj, GatLayerParams(values["W"], values["a"], activation=activation, mode=mode))
    report = finite_diff_check(loss, values, gat_backward(trace, upstream))
    assert report.passed, str(report)


def test_gat_stack_gradients(rng):
    n = 4
    graph = CharGraph(n, [(1, 2, "chain"), (2, 3, "chain"), (1, 4, "dependency")])
    stack = GatStack(3, (4, 2), (2, 3), prefix="gat")
    store = ParamStore()
    stack.init(store, rng, 0.5)
    assert stack.widths() == [8, 2]
    assert store.names() == ["gat.1.W", "gat.1.a", "gat.2.W", "gat.2.a"]

    f = rng.normal(size=(n, 3))
    d1, d2 = rng.normal(size=(n, 8)), rng.normal(size=(n, 2))

    def loss(p):
        outputs, _ = stack.forward(store, p["f"], graph)
        return float(np.sum(outputs[0] * d1) + np.sum(outputs[1] * d2))

    _, traces = stack.forward(store, f, graph)
    grads = {}
    df = stack.backward(store, traces, {1: d1, 2: d2}, grads)
    params = {name: store[name] for name in store.names()}
    params["f"] = f
    report = finite_diff_check(loss, params, dict(grads, f=df))
    assert report.passed, str(report)


def test_stale_trace_is_rejected(rng):
    layer = GatLayer("g", 4, 3, 2)
    store = ParamStore()
    layer.init(store, rng, 0.1)
    out, trace = layer.forward(store, rng.normal(size=(3, 4)), CharGraph(3))
    store.bump()
    with pytest.raises(aw.GatError) as err:
        layer.backward(store, trace, np.ones_like(out), {})
    assert err.value.msg == "stale_trace"


def test_gat_input_validation(rng):
    params = _params(rng)
    with pytest.raises(aw.GatError) as err:
        gat_forward(rng.normal(size=(3, 5)), CharGraph(3), params)
    assert err.value.msg == "dimension_mismatch"
    with pytest.raises(aw.GatError) as err:
        gat_forward(rng.normal(size=(3, 4)), CharGraph(2), params)
    assert err.value.msg == "node_mismatch"
    with pytest.raises(aw.GatError):
        _params(rng, mode="sum")
