"""
A single-layer bidirectional LSTM with hand-derived backpropagation through time.

Each direction holds ``W`` (4H x D), ``U`` (4H x H) and ``b`` (4H) with the gate blocks
in the order input, forget, candidate, output:

.. code-block::

    i, f, o = sigmoid(...), g = tanh(...)
    c_t = f * c_{t-1} + i * g
    h_t = o * tanh(c_t)

The output at every position is ``[h_forward || h_backward]``.
"""

from dataclasses import dataclass

import numpy as np

import graminspect._auxiliary as aux
import graminspect._auxiliary.warnings as aw
from graminspect.Layers._base import Layer, Trace
from graminspect.numerics import sigmoid

logger = aux.default_logger()

DIRECTIONS = ("fw", "bw")


@dataclass
class BiLstmParams:
    """
    The gate weights of both directions.

    Attributes
    ----------
    fw, bw : dict
        {"W": 4H x D, "U": 4H x H, "b": 4H} per direction.
    """

    fw: dict
    bw: dict

    @property
    def hidden(self):
        return self.fw["U"].shape[1]

    @property
    def in_dim(self):
        return self.fw["W"].shape[1]


def _direction_forward(x, W, U, b):
    n = x.shape[0]
    hidden = U.shape[1]
    h = np.zeros((n + 1, hidden))
    c = np.zeros((n + 1, hidden))
    gates = np.zeros((n, 4 * hidden))
    for t in range(n):
        z = W @ x[t] + U @ h[t] + b
        i = sigmoid(z[:hidden])
        f = sigmoid(z[hidden : 2 * hidden])
        g = np.tanh(z[2 * hidden : 3 * hidden])
        o = sigmoid(z[3 * hidden :])
        c[t + 1] = f * c[t] + i * g
        h[t + 1] = o * np.tanh(c[t + 1])
        gates[t] = np.concatenate([i, f, g, o])
    return h, c, gates


def _direction_backward(x, W, U, h, c, gates, dh_out):
    n = x.shape[0]
    hidden = U.shape[1]
    dW, dU, db = np.zeros_like(W), np.zeros_like(U), np.zeros(W.shape[0])
    dx = np.zeros_like(x)
    dh_next = np.zeros(hidden)
    dc_next = np.zeros(hidden)
    for t in range(n - 1, -1, -1):
        i, f, g, o = np.split(gates[t], 4)
        tanh_c = np.tanh(c[t + 1])
        dh = dh_out[t] + dh_next
        do = dh * tanh_c
        dc = dh * o * (1.0 - tanh_c**2) + dc_next
        di = dc * g
        dg = dc * i
        df = dc * c[t]
        dc_next = dc * f
        dz = np.concatenate([di * i * (1.0 - i), df * f * (1.0 - f), dg * (1.0 - g**2), do * o * (1.0 - o)])
        dW += np.outer(dz, x[t])
        dU += np.outer(dz, h[t])
        db += dz
        dx[t] = W.T @ dz
        dh_next = U.T @ dz
    return dx, dW, dU, db


def _check_width(x, in_dim):
    if x.ndim != 2 or x.shape[1] != in_dim:
        e = aw.LstmError("width_mismatch", width=x.shape[-1], expected=in_dim)
        logger.error(e)
        raise e


def bilstm_forward(features, params: BiLstmParams):
    """
    Runs the bidirectional LSTM.

    Parameters
    ----------
    features : np.ndarray
        N x D input features.
    params : BiLstmParams

    Returns
    -------
    states : np.ndarray
        N x 2H, forward states followed by backward states.
    trace : Trace
    """
    x = np.asarray(features, dtype=np.float64)
    _check_width(x, params.in_dim)
    fw = _direction_forward(x, params.fw["W"], params.fw["U"], params.fw["b"])
    bw = _direction_forward(x[::-1], params.bw["W"], params.bw["U"], params.bw["b"])
    states = np.concatenate([fw[0][1:], bw[0][1:][::-1]], axis=1)
    return states, Trace(version=0, x=x, fw=fw, bw=bw, params=params)


def bilstm_backward(trace: Trace, upstream):
    """
    Backpropagates through ``bilstm_forward``.

    Returns
    -------
    dict
        "x" (N x D) and per direction "fw.W", "fw.U", "fw.b", "bw.W", "bw.U", "bw.b".
    """
    params = trace.params
    hidden = params.hidden
    upstream = np.asarray(upstream, dtype=np.float64)
    x = trace.x

    dx_fw, *g_fw = _direction_backward(x, params.fw["W"], params.fw["U"], *trace.fw, upstream[:, :hidden])
    dx_bw, *g_bw = _direction_backward(x[::-1], params.bw["W"], params.bw["U"], *trace.bw, upstream[::-1, hidden:])

    grads = {"x": dx_fw + dx_bw[::-1]}
    for direction, g in zip(DIRECTIONS, (g_fw, g_bw)):
        for name, value in zip(("W", "U", "b"), g):
            grads[f"{direction}.{name}"] = value
    return grads


class BiLstm(Layer):
    """
    A bidirectional LSTM whose parameters live in a ``ParamStore`` under
    ``<prefix>.fw.W``, ``<prefix>.fw.U``, ``<prefix>.fw.b`` and the same for ``bw``.

    Parameters
    ----------
    prefix : str
    in_dim : int
    hidden : int
    """

    __slots__ = ["in_dim", "hidden"]

    _Error = aw.LstmError

    def __init__(self, prefix: str, in_dim: int, hidden: int):
        super().__init__(prefix)
        self.in_dim = in_dim
        self.hidden = hidden

    @property
    def width(self):
        return 2 * self.hidden

    def _params(self):
        return [f"{d}.{p}" for d in DIRECTIONS for p in ("W", "U", "b")]

    def init(self, store, rng, scale: float):
        for d in DIRECTIONS:
            store.normal(rng, self.name(f"{d}.W"), (4 * self.hidden, self.in_dim), scale)
            store.normal(rng, self.name(f"{d}.U"), (4 * self.hidden, self.hidden), scale)
            store.zeros(self.name(f"{d}.b"), (4 * self.hidden,))

    def params(self, store):
        return BiLstmParams(
            **{d: {p: store[self.name(f"{d}.{p}")] for p in ("W", "U", "b")} for d in DIRECTIONS}
        )

    def forward(self, store, x):
        states, trace = bilstm_forward(x, self.params(store))
        trace.version = getattr(store, "version", 0)
        return states, trace

    def backward(self, store, trace, dout, grads: dict):
        self._check_trace(trace, store)
        g = bilstm_backward(trace, dout)
        for p in self._params():
            self._accumulate(grads, self.name(p), g[p])
        return g["x"]
