"""
The base classes for the learned layers.

A layer owns a name prefix and knows which parameters it adds to a ``ParamStore``.
``forward`` reads the parameters from the store and returns the output together with a
``Trace`` of everything ``backward`` needs. ``backward`` accumulates parameter gradients
into a gradient dict and returns the gradient with respect to the layer input.
"""

from types import SimpleNamespace

import graminspect._auxiliary as aux
import graminspect._auxiliary.warnings as aw

logger = aux.default_logger()


class Trace(SimpleNamespace):
    """
    Cached forward quantities of one layer call (always carries the parameter `version`).
    """


class Layer:
    """
    A superclass for learned layers (not for End-User usage).

    Parameters
    ----------
    prefix : str
        The name prefix of all parameters of the layer.
    """

    __slots__ = ["_prefix"]

    _Error = aw.TaggerError

    def __init__(self, prefix: str):
        self._prefix = prefix

    @property
    def prefix(self):
        return self._prefix

    def name(self, param: str):
        """
        Returns the full store name of a parameter of this layer.
        """
        return f"{self._prefix}.{param}"

    def param_names(self):
        """
        Returns the full names of all parameters of this layer.
        """
        return [self.name(p) for p in self._params()]

    def init(self, store, rng, scale: float):
        """
        Adds the initial parameters of the layer to a store.
        """
        raise NotImplementedError

    def _params(self):
        raise NotImplementedError

    def _trace(self, store, **cached):
        return Trace(version=getattr(store, "version", 0), **cached)

    def _check_trace(self, trace, store):
        version = getattr(store, "version", 0)
        if trace.version != version:
            e = self._Error("stale_trace", trace_version=trace.version, version=version)
            logger.critical(e)
            raise e

    @staticmethod
    def _accumulate(grads: dict, name: str, value):
        if name in grads:
            grads[name] += value
        else:
            grads[name] = value.copy()
