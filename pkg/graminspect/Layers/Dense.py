"""
The affine layer ``y = x W^T + b`` (used as emission head).
"""

from graminspect.Layers._base import Layer


class Dense(Layer):
    """
    An affine projection.

    Parameters
    ----------
    prefix : str
        The parameter name prefix.
    in_dim : int
        The input width.
    out_dim : int
        The output width.
    """

    __slots__ = ["in_dim", "out_dim"]

    def __init__(self, prefix: str, in_dim: int, out_dim: int):
        super().__init__(prefix)
        self.in_dim = in_dim
        self.out_dim = out_dim

    def _params(self):
        return ["W", "b"]

    def init(self, store, rng, scale: float):
        store.normal(rng, self.name("W"), (self.out_dim, self.in_dim), scale)
        store.zeros(self.name("b"), (self.out_dim,))

    def forward(self, store, x):
        y = x @ store[self.name("W")].T + store[self.name("b")]
        return y, self._trace(store, x=x)

    def backward(self, store, trace, dy, grads: dict):
        self._check_trace(trace, store)
        self._accumulate(grads, self.name("W"), dy.T @ trace.x)
        self._accumulate(grads, self.name("b"), dy.sum(axis=0))
        return dy @ store[self.name("W")]
