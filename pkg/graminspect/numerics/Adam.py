"""
The bias-corrected Adam optimizer.

``adam_step`` is the pure form (returns new parameters and a new state);
``Adam`` applies the same update in place to a ``ParamStore`` and bumps its version.
"""

from dataclasses import dataclass, field, replace

import numpy as np

import graminspect._auxiliary as aux
import graminspect._auxiliary.warnings as aw
import graminspect.defaults as defaults

logger = aux.default_logger()


@dataclass
class AdamState:
    """
    Adam hyperparameters, step counter and per-parameter moment estimates.
    """

    lr: float = defaults.paper["lr"]
    beta1: float = defaults.adam_betas[0]
    beta2: float = defaults.adam_betas[1]
    eps: float = defaults.adam_eps
    step: int = 0
    m: dict = field(default_factory=dict)
    v: dict = field(default_factory=dict)


def _check_shapes(name, param, grad):
    if np.shape(param) != np.shape(grad):
        e = aw.NumericsError("shape_mismatch", name=name, pshape=np.shape(param), gshape=np.shape(grad))
        logger.error(e)
        raise e


def _moments(state, name, param, grad, step):
    m = state.m.get(name, np.zeros_like(param))
    v = state.v.get(name, np.zeros_like(param))
    m = state.beta1 * m + (1.0 - state.beta1) * grad
    v = state.beta2 * v + (1.0 - state.beta2) * grad * grad
    m_hat = m / (1.0 - state.beta1**step)
    v_hat = v / (1.0 - state.beta2**step)
    update = state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
    return m, v, update


def adam_step(params: dict, grads: dict, state: AdamState):
    """
    Performs one Adam update.

    Parameters
    ----------
    params : dict
        name -> array.
    grads : dict
        name -> gradient array. Parameters without a gradient are left untouched.
    state : AdamState
        The optimizer state (not modified).

    Returns
    -------
    params : dict
        The updated parameters (new arrays).
    state : AdamState
        The new state with the step counter increased by one.
    """
    step = state.step + 1
    new_params, new_m, new_v = dict(params), dict(state.m), dict(state.v)
    for name, grad in grads.items():
        param = np.asarray(params[name], dtype=np.float64)
        _check_shapes(name, param, grad)
        new_m[name], new_v[name], update = _moments(state, name, param, grad, step)
        new_params[name] = param - update
    return new_params, replace(state, step=step, m=new_m, v=new_v)


class Adam:
    """
    Applies Adam updates in place to a ``ParamStore``.

    Parameters
    ----------
    lr : float
        The learning rate.
    betas : tuple
        The moment decay rates.
    eps : float
        The denominator fuzz.
    """

    __slots__ = ["_state"]

    def __init__(self, lr: float = defaults.paper["lr"], betas: tuple = defaults.adam_betas, eps: float = defaults.adam_eps):
        self._state = AdamState(lr=lr, beta1=betas[0], beta2=betas[1], eps=eps)

    @property
    def state(self):
        return self._state

    def step(self, store, grads: dict):
        """
        Updates every trainable parameter of `store` that has a gradient and bumps the store version.
        """
        step = self._state.step + 1
        for name in store.trainable():
            if name not in grads:
                continue
            param, grad = store[name], grads[name]
            _check_shapes(name, param, grad)
            m, v, update = _moments(self._state, name, param, grad, step)
            self._state.m[name], self._state.v[name] = m, v
            param -= update
        self._state.step = step
        store.bump()
