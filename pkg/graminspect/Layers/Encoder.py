"""
The character encoder that stands in for a pretrained language model.

Characters are mapped to indices by a ``Vocab`` (index 0 is the unknown character) and
embedded. With ``kind = "transformer"`` sinusoidal positions are added and a stack of small
post-norm transformer layers (multi-head self-attention and a tanh feed-forward block,
each with a residual connection and layer normalisation) follows.

Sentences longer than ``max_len`` are encoded in consecutive streams of at most
``max_len`` characters; positions and attention restart in every stream, so the output
always has one row per character.

The encoder returns the output of every layer (layer 0 = embeddings), so a caller may pick
the layer that feeds a later stage, and its backward pass accepts gradients for any
subset of these layer outputs.
"""

from dataclasses import asdict, dataclass

import numpy as np

import graminspect._auxiliary as aux
import graminspect._auxiliary.warnings as aw
import graminspect.defaults as defaults
from graminspect.Layers._base import Layer, Trace
from graminspect.numerics import masked_softmax

logger = aux.default_logger()

KINDS = ("embedding", "transformer")

_LN_EPS = 1e-5


class Vocab:
    """
    A character vocabulary. Index 0 is reserved for unknown characters.

    Parameters
    ----------
    chars : iterable
        The known characters (duplicates are ignored, order is kept).
    """

    __slots__ = ["_chars", "_index"]

    UNK = 0

    def __init__(self, chars=()):
        self._chars = tuple(dict.fromkeys(chars))
        self._index = {c: i for i, c in enumerate(self._chars, start=1)}

    @classmethod
    def build(cls, corpus):
        """
        Builds a vocabulary from all characters of a corpus (sorted, so the result
        does not depend on sentence order).
        """
        return cls(sorted({c for sentence in corpus for c in sentence.chars}))

    def encode(self, chars):
        """
        Returns the character indices of a sentence (unknown characters map to 0).
        """
        return np.array([self._index.get(c, self.UNK) for c in chars], dtype=np.int64)

    def to_list(self):
        return list(self._chars)

    def __len__(self):
        """The number of rows of the embedding table (known characters + UNK)"""
        return len(self._chars) + 1

    def __eq__(self, other):
        return isinstance(other, Vocab) and self._chars == other._chars


@dataclass(frozen=True)
class EncoderConfig:
    """
    The encoder architecture.

    Attributes
    ----------
    vocab_size : int
        The number of embedding rows (including UNK).
    embedding_dim : int
        The model width.
    kind : str
        "embedding" (embeddings only) or "transformer".
    layers : int
        The number of transformer layers (ignored for "embedding").
    heads : int
        The attention heads per transformer layer.
    ffn : int
        The feed-forward width.
    max_len : int
        The maximal stream length.
    """

    vocab_size: int
    embedding_dim: int = defaults.paper["embedding_dim"]
    kind: str = defaults.paper["encoder_kind"]
    layers: int = defaults.paper["encoder_layers"]
    heads: int = defaults.paper["encoder_heads"]
    ffn: int = defaults.paper["encoder_ffn"]
    max_len: int = defaults.paper["max_len"]

    def __post_init__(self):
        if self.kind not in KINDS:
            e = aw.EncoderError("unknown_kind", kind=self.kind)
            logger.error(e)
            raise e
        if self.kind == "transformer" and self.layers > 0 and self.embedding_dim % self.heads:
            e = aw.EncoderError("bad_heads", width=self.embedding_dim, heads=self.heads)
            logger.error(e)
            raise e
        if min(self.vocab_size, self.embedding_dim, self.max_len) < 1:
            e = aw.TaggerError("bad_config", reason="encoder widths and the stream length must be positive")
            logger.error(e)
            raise e

    @property
    def depth(self):
        """The number of layers above the embeddings"""
        return self.layers if self.kind == "transformer" else 0

    def to_dict(self):
        return asdict(self)


def positions(n: int, width: int):
    """
    Sinusoidal position encodings (n x width).
    """
    pos = np.arange(n)[:, None]
    rates = np.power(10000.0, -(2 * (np.arange(width) // 2)) / width)
    angles = pos * rates[None, :]
    return np.where(np.arange(width) % 2 == 0, np.sin(angles), np.cos(angles))


def streams(n: int, max_len: int):
    """
    Returns the (start, stop) 0-based half-open bounds of the encoding streams.
    """
    return [(s, min(s + max_len, n)) for s in range(0, n, max_len)]


def _layer_norm(x, g, b):
    mu = x.mean(axis=1, keepdims=True)
    sigma = np.sqrt(x.var(axis=1, keepdims=True) + _LN_EPS)
    xhat = (x - mu) / sigma
    return g * xhat + b, (xhat, sigma)


def _layer_norm_backward(dy, g, cache):
    xhat, sigma = cache
    width = xhat.shape[1]
    dxhat = dy * g
    dx = (width * dxhat - dxhat.sum(axis=1, keepdims=True) - xhat * (dxhat * xhat).sum(axis=1, keepdims=True)) / (width * sigma)
    return dx, (dy * xhat).sum(axis=0), dy.sum(axis=0)


class Encoder(Layer):
    """
    The character encoder. Parameters live under ``<prefix>.emb`` and
    ``<prefix>.<layer>.<name>`` in a ``ParamStore``.

    Parameters
    ----------
    config : EncoderConfig
    prefix : str
    """

    __slots__ = ["config"]

    _Error = aw.EncoderError

    _LAYER_PARAMS = ("Wq", "bq", "Wk", "bk", "Wv", "bv", "Wo", "bo", "ln1.g", "ln1.b", "W1", "c1", "W2", "c2", "ln2.g", "ln2.b")

    def __init__(self, config: EncoderConfig, prefix: str = "enc"):
        super().__init__(prefix)
        self.config = config

    @property
    def width(self):
        return self.config.embedding_dim

    def _params(self):
        names = ["emb"]
        for layer in range(1, self.config.depth + 1):
            names.extend(f"{layer}.{p}" for p in self._LAYER_PARAMS)
        return names

    def init(self, store, rng, scale: float):
        cfg = self.config
        d, ffn = cfg.embedding_dim, cfg.ffn
        store.normal(rng, self.name("emb"), (cfg.vocab_size, d), scale)
        for layer in range(1, cfg.depth + 1):
            p = lambda name: self.name(f"{layer}.{name}")
            for w in ("Wq", "Wk", "Wv", "Wo"):
                store.normal(rng, p(w), (d, d), scale)
                store.zeros(p("b" + w[1]), (d,))
            store.add(p("ln1.g"), np.ones(d))
            store.zeros(p("ln1.b"), (d,))
            store.normal(rng, p("W1"), (ffn, d), scale)
            store.zeros(p("c1"), (ffn,))
            store.normal(rng, p("W2"), (d, ffn), scale)
            store.zeros(p("c2"), (d,))
            store.add(p("ln2.g"), np.ones(d))
            store.zeros(p("ln2.b"), (d,))

    def forward(self, store, ids):
        """
        Encodes one sentence.

        Parameters
        ----------
        ids : np.ndarray
            The character indices (see ``Vocab.encode``).

        Returns
        -------
        outputs : list
            N x D outputs of every layer; ``outputs[0]`` are the (position-augmented) embeddings.
        trace : Trace
        """
        cfg = self.config
        ids = np.asarray(ids, dtype=np.int64)
        h0 = store[self.name("emb")][ids]
        if cfg.depth == 0:
            return [h0], self._trace(store, ids=ids, caches=[])

        bounds = streams(len(ids), cfg.max_len)
        h0 = h0 + np.concatenate([positions(stop - start, cfg.embedding_dim) for start, stop in bounds])
        outputs, caches = [h0], []
        for layer in range(1, cfg.depth + 1):
            x = outputs[-1]
            parts, layer_caches = [], []
            for start, stop in bounds:
                y, cache = self._block_forward(store, layer, x[start:stop])
                parts.append(y)
                layer_caches.append(cache)
            outputs.append(np.concatenate(parts))
            caches.append(layer_caches)
        return outputs, self._trace(store, ids=ids, caches=caches, bounds=bounds)

    def backward(self, store, trace, douts: dict, grads: dict):
        """
        Backpropagates gradients given for any subset of the layer outputs.

        Parameters
        ----------
        douts : dict
            layer index (0 = embeddings) -> gradient with respect to that output.
        """
        self._check_trace(trace, store)
        cfg = self.config
        d = None
        for layer in range(cfg.depth, 0, -1):
            if layer in douts:
                d = douts[layer] if d is None else d + douts[layer]
            if d is None:
                continue
            d = np.concatenate(
                [self._block_backward(store, layer, d[start:stop], cache, grads) for (start, stop), cache in zip(trace.bounds, trace.caches[layer - 1])]
            )
        if 0 in douts:
            d = douts[0] if d is None else d + douts[0]
        if d is None:
            return
        demb = np.zeros_like(store[self.name("emb")])
        np.add.at(demb, trace.ids, d)
        self._accumulate(grads, self.name("emb"), demb)

    def _p(self, store, layer, name):
        return store[self.name(f"{layer}.{name}")]

    def _block_forward(self, store, layer, x):
        cfg = self.config
        p = lambda name: self._p(store, layer, name)
        n, width = x.shape
        dh = width // cfg.heads

        q = x @ p("Wq").T + p("bq")
        k = x @ p("Wk").T + p("bk")
        v = x @ p("Wv").T + p("bv")
        mask = np.ones((n, n), dtype=bool)
        probs, ctx = [], np.zeros_like(x)
        for h in range(cfg.heads):
            sl = slice(h * dh, (h + 1) * dh)
            P = masked_softmax(q[:, sl] @ k[:, sl].T / np.sqrt(dh), mask)
            probs.append(P)
            ctx[:, sl] = P @ v[:, sl]
        attn = ctx @ p("Wo").T + p("bo")
        y1, ln1 = _layer_norm(x + attn, p("ln1.g"), p("ln1.b"))

        u = np.tanh(y1 @ p("W1").T + p("c1"))
        ff = u @ p("W2").T + p("c2")
        y2, ln2 = _layer_norm(y1 + ff, p("ln2.g"), p("ln2.b"))

        cache = Trace(version=0, x=x, q=q, k=k, v=v, probs=probs, ctx=ctx, y1=y1, ln1=ln1, u=u, ln2=ln2)
        return y2, cache

    def _block_backward(self, store, layer, dy2, cache, grads):
        cfg = self.config
        p = lambda name: self._p(store, layer, name)
        acc = lambda name, value: self._accumulate(grads, self.name(f"{layer}.{name}"), value)
        dh = cache.x.shape[1] // cfg.heads

        dr2, dg2, db2 = _layer_norm_backward(dy2, p("ln2.g"), cache.ln2)
        acc("ln2.g", dg2)
        acc("ln2.b", db2)
        dy1 = dr2.copy()
        acc("W2", dr2.T @ cache.u)
        acc("c2", dr2.sum(axis=0))
        du = (dr2 @ p("W2")) * (1.0 - cache.u**2)
        acc("W1", du.T @ cache.y1)
        acc("c1", du.sum(axis=0))
        dy1 += du @ p("W1")

        dr1, dg1, db1 = _layer_norm_backward(dy1, p("ln1.g"), cache.ln1)
        acc("ln1.g", dg1)
        acc("ln1.b", db1)
        dx = dr1.copy()
        acc("Wo", dr1.T @ cache.ctx)
        acc("bo", dr1.sum(axis=0))
        dctx = dr1 @ p("Wo")

        dq, dk, dv = np.zeros_like(cache.q), np.zeros_like(cache.k), np.zeros_like(cache.v)
        for h, P in enumerate(cache.probs):
            sl = slice(h * dh, (h + 1) * dh)
            dP = dctx[:, sl] @ cache.v[:, sl].T
            dv[:, sl] = P.T @ dctx[:, sl]
            dS = P * (dP - np.sum(P * dP, axis=1, keepdims=True)) / np.sqrt(dh)
            dq[:, sl] = dS @ cache.k[:, sl]
            dk[:, sl] = dS.T @ cache.q[:, sl]
        for name, grad in (("q", dq), ("k", dk), ("v", dv)):
            acc(f"W{name}", grad.T @ cache.x)
            acc(f"b{name}", grad.sum(axis=0))
            dx += grad @ p(f"W{name}")
        return dx
