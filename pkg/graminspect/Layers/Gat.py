"""
The multi-head graph attention layer and its hand-derived backward pass.

For every head m with projection W^m (out x in) and attention vector a^m (length 2 out):

.. code-block::

    z_i      = W^m f_i
    e_ij     = LeakyReLU( a^m . [z_i || z_j] )
    alpha_ij = softmax over j in N(i) of e_ij
    h^m_i    = sum_j alpha_ij z_j

In `concat` mode the layer returns ``sigma(h^1) || ... || sigma(h^M)`` (width M out),
in `average` mode it returns ``sigma( mean_m h^m )`` (width out).
Neighbourhoods N(i) come from a ``CharGraph`` (or a boolean adjacency matrix) and always
contain i itself.
"""

from dataclasses import dataclass

import numpy as np

import graminspect._auxiliary as aux
import graminspect._auxiliary.warnings as aw
import graminspect.defaults as defaults
from graminspect.Layers._base import Layer, Trace
from graminspect.numerics import elu, elu_grad, leaky_relu, leaky_relu_grad, masked_softmax

logger = aux.default_logger()

MODES = ("concat", "average")
ACTIVATIONS = ("elu", "identity")


@dataclass
class GatLayerParams:
    """
    The parameters of one GAT layer.

    Attributes
    ----------
    W : np.ndarray
        The per-head projections, shape (M, out_dim, in_dim).
    a : np.ndarray
        The per-head attention vectors, shape (M, 2 out_dim).
    activation : str
        "elu" or "identity".
    slope : float
        The LeakyReLU slope of the attention logits.
    mode : str
        "concat" or "average".
    version : int
        The parameter version (used to detect stale traces).
    """

    W: np.ndarray
    a: np.ndarray
    activation: str = "elu"
    slope: float = defaults.leaky_slope
    mode: str = "concat"
    version: int = 0

    def __post_init__(self):
        self.W = np.asarray(self.W, dtype=np.float64)
        self.a = np.asarray(self.a, dtype=np.float64)
        if self.mode not in MODES:
            e = aw.GatError("unknown_mode", mode=self.mode)
            logger.error(e)
            raise e
        if self.activation not in ACTIVATIONS:
            e = aw.GatError("unknown_activation", activation=self.activation)
            logger.error(e)
            raise e

    @property
    def heads(self):
        return self.W.shape[0]

    @property
    def out_dim(self):
        return self.W.shape[1]

    @property
    def in_dim(self):
        return self.W.shape[2]

    @property
    def width(self):
        """The output width of the layer"""
        return self.heads * self.out_dim if self.mode == "concat" else self.out_dim


def _adjacency(graph):
    if hasattr(graph, "adjacency"):
        return graph.adjacency()
    return np.asarray(graph, dtype=bool)


def _sigma(x, activation):
    return elu(x) if activation == "elu" else x


def _sigma_grad(x, activation):
    return elu_grad(x) if activation == "elu" else np.ones_like(x)


def _check_inputs(f, adj, params):
    if f.ndim != 2 or f.shape[1] != params.in_dim:
        e = aw.GatError("dimension_mismatch", width=f.shape[-1], expected=params.in_dim)
        logger.error(e)
        raise e
    if adj.shape != (f.shape[0], f.shape[0]):
        e = aw.GatError("node_mismatch", n_graph=adj.shape[0], n_features=f.shape[0])
        logger.error(e)
        raise e


def _head(f, adj, W, a, slope):
    out = W.shape[0]
    z = f @ W.T
    logits = (z @ a[:out])[:, None] + (z @ a[out:])[None, :]
    alpha = masked_softmax(leaky_relu(logits, slope), adj)
    return z, logits, alpha


def gat_attention(f, graph, params: GatLayerParams, head: int = 0):
    """
    Computes the attention coefficients of one head.

    Parameters
    ----------
    f : np.ndarray
        The node features (N x in_dim).
    graph : CharGraph or np.ndarray
        The graph (or its boolean adjacency).
    params : GatLayerParams
    head : int
        The head index (0-based).

    Returns
    -------
    np.ndarray
        alpha (N x N); rows sum to 1 over the neighbourhood and are 0 elsewhere.
    """
    f = np.asarray(f, dtype=np.float64)
    adj = _adjacency(graph)
    _check_inputs(f, adj, params)
    return _head(f, adj, params.W[head], params.a[head], params.slope)[2]


def gat_forward(f, graph, params: GatLayerParams):
    """
    Applies a GAT layer.

    Parameters
    ----------
    f : np.ndarray
        The node features (N x in_dim).
    graph : CharGraph or np.ndarray
    params : GatLayerParams

    Returns
    -------
    out : np.ndarray
        N x (M out_dim) in concat mode, N x out_dim in average mode.
    trace : Trace
        Everything ``gat_backward`` needs (including the attention matrices `alpha`).
    """
    f = np.asarray(f, dtype=np.float64)
    adj = _adjacency(graph)
    _check_inputs(f, adj, params)

    zs, logits, alphas, hs = [], [], [], []
    for m in range(params.heads):
        z, e, alpha = _head(f, adj, params.W[m], params.a[m], params.slope)
        zs.append(z)
        logits.append(e)
        alphas.append(alpha)
        hs.append(alpha @ z)

    if params.mode == "concat":
        pre = np.concatenate(hs, axis=1)
    else:
        pre = np.mean(hs, axis=0)
    out = _sigma(pre, params.activation)

    trace = Trace(version=params.version, f=f, adj=adj, z=zs, logits=logits, alpha=alphas, pre=pre, params=params)
    return out, trace


def gat_backward(trace: Trace, upstream, params: GatLayerParams = None):
    """
    Backpropagates through a GAT layer.

    Parameters
    ----------
    trace : Trace
        The trace of the matching ``gat_forward`` call.
    upstream : np.ndarray
        The gradient with respect to the layer output.
    params : GatLayerParams
        If given, its version must match the trace's version.

    Returns
    -------
    dict
        The gradients "f" (N x in_dim), "W" (M x out x in) and "a" (M x 2 out).
    """
    if params is not None and params.version != trace.version:
        e = aw.GatError("stale_trace", trace_version=trace.version, version=params.version)
        logger.critical(e)
        raise e
    params = trace.params
    out = params.out_dim
    dpre = np.asarray(upstream, dtype=np.float64) * _sigma_grad(trace.pre, params.activation)

    df = np.zeros_like(trace.f)
    dW = np.zeros_like(params.W)
    da = np.zeros_like(params.a)
    for m in range(params.heads):
        if params.mode == "concat":
            dh = dpre[:, m * out : (m + 1) * out]
        else:
            dh = dpre / params.heads
        z, alpha, a = trace.z[m], trace.alpha[m], params.a[m]

        dalpha = dh @ z.T
        dz = alpha.T @ dh
        dlogit = alpha * (dalpha - np.sum(alpha * dalpha, axis=1, keepdims=True))
        de = dlogit * leaky_relu_grad(trace.logits[m], params.slope)
        ds_src = de.sum(axis=1)
        ds_dst = de.sum(axis=0)

        da[m, :out] = z.T @ ds_src
        da[m, out:] = z.T @ ds_dst
        dz += np.outer(ds_src, a[:out]) + np.outer(ds_dst, a[out:])
        dW[m] = dz.T @ trace.f
        df += dz @ params.W[m]
    return {"f": df, "W": dW, "a": da}


class GatLayer(Layer):
    """
    A GAT layer whose parameters live in a ``ParamStore`` under ``<prefix>.W`` and ``<prefix>.a``.

    Parameters
    ----------
    prefix : str
    in_dim : int
    out_dim : int
    heads : int
    mode : str
        "concat" or "average".
    activation : str
        "elu" or "identity".
    slope : float
        The LeakyReLU slope.
    """

    __slots__ = ["in_dim", "out_dim", "heads", "mode", "activation", "slope"]

    _Error = aw.GatError

    def __init__(self, prefix, in_dim, out_dim, heads, mode="concat", activation="elu", slope=defaults.leaky_slope):
        super().__init__(prefix)
        self.in_dim, self.out_dim, self.heads = in_dim, out_dim, heads
        self.mode, self.activation, self.slope = mode, activation, slope

    @property
    def width(self):
        return self.heads * self.out_dim if self.mode == "concat" else self.out_dim

    def _params(self):
        return ["W", "a"]

    def init(self, store, rng, scale: float):
        store.normal(rng, self.name("W"), (self.heads, self.out_dim, self.in_dim), scale)
        store.normal(rng, self.name("a"), (self.heads, 2 * self.out_dim), scale)

    def params(self, store):
        """
        Returns the layer parameters as ``GatLayerParams`` (sharing the store arrays).
        """
        return GatLayerParams(
            W=store[self.name("W")],
            a=store[self.name("a")],
            activation=self.activation,
            slope=self.slope,
            mode=self.mode,
            version=getattr(store, "version", 0),
        )

    def forward(self, store, f, graph):
        return gat_forward(f, graph, self.params(store))

    def backward(self, store, trace, dout, grads: dict):
        self._check_trace(trace, store)
        g = gat_backward(trace, dout)
        self._accumulate(grads, self.name("W"), g["W"])
        self._accumulate(grads, self.name("a"), g["a"])
        return g["f"]


class GatStack:
    """
    A stack of GAT layers: every layer but the last concatenates its heads with ELU,
    the last one averages its heads without a nonlinearity.

    Parameters
    ----------
    in_dim : int
        The input feature width.
    dims : tuple
        The per-head output width of every layer.
    heads : tuple
        The head count of every layer.
    prefix : str
        The name prefix (layers are named ``<prefix>.1``, ``<prefix>.2``, ...).
    """

    __slots__ = ["layers"]

    def __init__(self, in_dim: int, dims: tuple, heads: tuple, prefix: str = "gat"):
        self.layers = []
        width = in_dim
        for idx, (dim, n_heads) in enumerate(zip(dims, heads), start=1):
            last = idx == len(dims)
            layer = GatLayer(
                f"{prefix}.{idx}",
                width,
                dim,
                n_heads,
                mode="average" if last else "concat",
                activation="identity" if last else "elu",
            )
            self.layers.append(layer)
            width = layer.width

    def widths(self):
        """The output width of every layer"""
        return [layer.width for layer in self.layers]

    def init(self, store, rng, scale: float):
        for layer in self.layers:
            layer.init(store, rng, scale)

    def forward(self, store, f, graph, masks: list = None):
        """
        Runs all layers.

        Parameters
        ----------
        masks : list
            Optional dropout masks applied to every layer output except the last
            (the caller applies its own mask to the hand-off output).

        Returns
        -------
        outputs : list
            The output of every layer.
        traces : list
        """
        adj = _adjacency(graph)
        outputs, traces = [], []
        x = f
        for idx, layer in enumerate(self.layers):
            out, trace = layer.forward(store, x, adj)
            outputs.append(out)
            traces.append(trace)
            x = out if masks is None or masks[idx] is None else out * masks[idx]
        return outputs, traces

    def backward(self, store, traces, douts: dict, grads: dict, masks: list = None):
        """
        Backpropagates through all layers.

        Parameters
        ----------
        douts : dict
            1-based layer index -> gradient with respect to that layer's output.

        Returns
        -------
        np.ndarray
            The gradient with respect to the stack input.
        """
        dx = None
        for idx in range(len(self.layers), 0, -1):
            d = douts.get(idx)
            if dx is not None:
                mask = None if masks is None else masks[idx - 1]
                dx = dx if mask is None else dx * mask
                d = dx if d is None else d + dx
            if d is None:
                d = np.zeros_like(traces[idx - 1].pre)
            dx = self.layers[idx - 1].backward(store, traces[idx - 1], d, grads)
        return dx
