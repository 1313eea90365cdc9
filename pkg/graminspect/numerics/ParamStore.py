"""
Defines the ``ParamStore``, the ordered name -> array mapping that holds every
learned tensor of a model.
"""

import numpy as np

import graminspect._auxiliary as aux
import graminspect._auxiliary.warnings as aw
from graminspect.numerics.numerics import dtype

logger = aux.default_logger()


class ParamStore:
    """
    An ordered mapping of parameter names to float64 arrays with a version counter.

    The version is bumped by every optimizer step (and by ``bump``), so traces that
    remember the version of their forward pass can detect that the parameters moved on.
    """

    __slots__ = ["_params", "_version", "_frozen"]

    def __init__(self, params: dict = None):
        self._params = {}
        self._version = 0
        self._frozen = set()
        for name, value in (params or {}).items():
            self.add(name, value)

    @property
    def version(self):
        return self._version

    def bump(self):
        """
        Marks the parameters as changed.
        """
        self._version += 1
        return self._version

    def add(self, name: str, value, frozen: bool = False):
        """
        Adds (or replaces) a parameter.

        Parameters
        ----------
        name : str
            The parameter name.
        value : array-like
            The initial value (copied as float64).
        frozen : bool
            Frozen parameters are never updated by an optimizer.
        """
        self._params[name] = np.array(value, dtype=dtype)
        if frozen:
            self._frozen.add(name)
        return self._params[name]

    def normal(self, rng, name: str, shape: tuple, scale: float):
        """
        Adds a parameter drawn from N(0, scale^2).
        """
        return self.add(name, rng.normal(0.0, scale, size=shape))

    def zeros(self, name: str, shape: tuple):
        """
        Adds an all-zero parameter.
        """
        return self.add(name, np.zeros(shape, dtype=dtype))

    def trainable(self):
        """
        Returns the names of all parameters an optimizer may update.
        """
        return [name for name in self._params if name not in self._frozen]

    def names(self):
        return list(self._params)

    def items(self):
        return self._params.items()

    def zeros_like(self):
        """
        Returns a dict of zero arrays shaped like every parameter (a gradient accumulator).
        """
        return {name: np.zeros_like(value) for name, value in self._params.items()}

    def copy(self):
        """
        Returns a deep copy (same version, same frozen set).
        """
        new = ParamStore()
        new._params = {name: value.copy() for name, value in self._params.items()}
        new._version = self._version
        new._frozen = set(self._frozen)
        return new

    def n_values(self):
        """
        Returns the total number of scalars stored.
        """
        return int(sum(value.size for value in self._params.values()))

    def __getitem__(self, name):
        return self._params[name]

    def __setitem__(self, name, value):
        value = np.asarray(value, dtype=dtype)
        if name in self._params and value.shape != self._params[name].shape:
            e = aw.NumericsError("shape_mismatch", name=name, pshape=self._params[name].shape, gshape=value.shape)
            logger.error(e)
            raise e
        self._params[name] = value

    def __contains__(self, name):
        return name in self._params

    def __iter__(self):
        return iter(self._params)

    def __len__(self):
        return len(self._params)

    def __repr__(self):
        return f"ParamStore({len(self)} tensors, {self.n_values()} values, version {self._version})"
