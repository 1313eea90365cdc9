import numpy as np
import pytest

import graminspect._auxiliary.warnings as aw
from graminspect.Layers import BiLstm, BiLstmParams, Dense, bilstm_backward, bilstm_forward
from graminspect.numerics import ParamStore, finite_diff_check, make_rng


def _params(rng, d=3, h=2, scale=0.5):
    return BiLstmParams(
        **{
            direction: {
                "W": rng.normal(scale=scale, size=(4 * h, d)),
                "U": rng.normal(scale=scale, size=(4 * h, h)),
                "b": rng.normal(scale=scale, size=4 * h),
            }
            for direction in ("fw", "bw")
        }
    )


def test_bilstm_shapes(rng):
    params = _params(rng)
    states, _ = bilstm_forward(rng.normal(size=(5, 3)), params)
    assert states.shape == (5, 4)
    with pytest.raises(aw.LstmError) as err:
        bilstm_forward(rng.normal(size=(5, 2)), params)
    assert err.value.msg == "width_mismatch"


def test_directions_read_opposite_contexts(rng):
    params = _params(rng)
    x = rng.normal(size=(6, 3))
    states, _ = bilstm_forward(x, params)
    changed = x.copy()
    changed[-1] += 1.0
    again, _ = bilstm_forward(changed, params)
    # the forward states before the last step only see the unchanged prefix
    assert np.allclose(states[:-1, :2], again[:-1, :2])
    assert not np.allclose(states[0, 2:], again[0, 2:])


def test_zero_weights_give_zero_states(rng):
    params = BiLstmParams(**{d: {"W": np.zeros((8, 3)), "U": np.zeros((8, 2)), "b": np.zeros(8)} for d in ("fw", "bw")})
    states, _ = bilstm_forward(rng.normal(size=(5, 3)), params)
    np.testing.assert_array_equal(states, np.zeros((5, 4)))


def test_reversed_input_swaps_the_directions(rng):
    shared = _params(rng).fw
    params = BiLstmParams(fw=shared, bw=shared)
    x = rng.normal(size=(6, 3))
    states, _ = bilstm_forward(x, params)
    mirrored, _ = bilstm_forward(x[::-1], params)
    np.testing.assert_allclose(mirrored[:, :2], states[::-1, 2:], atol=1e-12)
    np.testing.assert_allclose(mirrored[:, 2:], states[::-1, :2], atol=1e-12)


@pytest.mark.parametrize("seed", range(20))
def test_bilstm_gradients(seed):
    rng = make_rng(seed)
    n = 1 + seed % 6
    params = _params(rng)
    x = rng.normal(size=(n, 3))
    upstream = rng.normal(size=(n, 4))
    _, trace = bilstm_forward(x, params)
    grads = bilstm_backward(trace, upstream)

    values = {"x": x}
    for direction in ("fw", "bw"):
        for name in ("W", "U", "b"):
            values[f"{direction}.{name}"] = getattr(params, direction)[name]

    def loss(p):
        return float(np.sum(bilstm_forward(p["x"], params)[0] * upstream))

    report = finite_diff_check(loss, values, grads)
    assert report.passed, str(report)


def test_bilstm_layer_uses_the_store(rng):
    layer = BiLstm("lstm", 3, 2)
    store = ParamStore()
    layer.init(store, rng, 0.3)
    assert layer.width == 4
    assert sorted(layer.param_names()) == sorted(f"lstm.{d}.{p}" for d in ("fw", "bw") for p in ("W", "U", "b"))
    states, trace = layer.forward(store, rng.normal(size=(3, 3)))
    grads = {}
    dx = layer.backward(store, trace, np.ones_like(states), grads)
    assert dx.shape == (3, 3)
    assert set(grads) == set(layer.param_names())
    store.bump()
    with pytest.raises(aw.LstmError):
        layer.backward(store, trace, np.ones_like(states), grads)


def test_dense_gradients(rng):
    layer = Dense("head", 3, 2)
    store = ParamStore()
    layer.init(store, rng, 0.5)
    x, dy = rng.normal(size=(4, 3)), rng.normal(size=(4, 2))
    _, trace = layer.forward(store, x)
    grads = {}
    dx = layer.backward(store, trace, dy, grads)
    params = {"head.W": store["head.W"], "head.b": store["head.b"], "x": x}
    loss = lambda p: float(np.sum(layer.forward(store, p["x"])[0] * dy))
    report = finite_diff_check(loss, params, dict(grads, x=dx))
    assert report.passed, str(report)
