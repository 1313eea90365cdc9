"""
Elementary double-precision kernels shared by all learned modules:
stable log-sum-exp, neighbourhood-masked softmax, activations with their derivatives,
inverted dropout and the seeded random number generators.

All randomness in graminspect comes from ``make_rng`` (a ``numpy`` PCG64 generator),
so a seed fixes every stream on every platform. Worker streams are derived with
``spawn_rngs`` through ``numpy.random.SeedSequence.spawn`` and are never shared.
"""

import numpy as np
from scipy.special import expit, logsumexp

import graminspect._auxiliary as aux
import graminspect._auxiliary.warnings as aw
import graminspect.defaults as defaults

__all__ = [
    "dtype",
    "make_rng",
    "spawn_rngs",
    "log_sum_exp",
    "masked_softmax",
    "leaky_relu",
    "leaky_relu_grad",
    "elu",
    "elu_grad",
    "sigmoid",
    "dropout_mask",
    "check_finite",
]

logger = aux.default_logger()

dtype = np.float64
"""The dtype of every tensor"""


def make_rng(seed: int = None):
    """
    Returns a ``numpy.random.Generator`` backed by PCG64.

    Parameters
    ----------
    seed : int
        The seed. By default ``defaults.seed``.
    """
    seed = defaults.seed if seed is None else seed
    return np.random.Generator(np.random.PCG64(seed))


def spawn_rngs(seed: int, n: int):
    """
    Derives `n` independent generators from one seed (one per worker or purpose).
    """
    return [np.random.Generator(np.random.PCG64(s)) for s in np.random.SeedSequence(seed).spawn(n)]


def log_sum_exp(v, axis=None):
    """
    Computes log(sum(exp(v))) with max-shift stability.

    Parameters
    ----------
    v : array-like
        A non-empty vector (or array, reduced along `axis`).
    axis : int
        The axis to reduce. By default all entries are reduced.

    Returns
    -------
    float or np.ndarray
    """
    v = np.asarray(v, dtype=dtype)
    if v.size == 0:
        e = aw.NumericsError("empty_vector")
        logger.error(e)
        raise e
    return logsumexp(v, axis=axis)


def masked_softmax(logits, mask):
    """
    Softmax over the last axis restricted to the entries where `mask` is True.

    Parameters
    ----------
    logits : np.ndarray
        A vector or a matrix (normalised row-wise).
    mask : np.ndarray
        A boolean array of the same shape. Every row needs at least one True entry.

    Returns
    -------
    np.ndarray
        Masked-out entries are exactly 0, kept entries sum to 1 per row.
    """
    logits = np.asarray(logits, dtype=dtype)
    mask = np.asarray(mask, dtype=bool)
    if not mask.any(axis=-1).all():
        e = aw.NumericsError("empty_mask")
        logger.error(e)
        raise e
    shift = np.max(np.where(mask, logits, -np.inf), axis=-1, keepdims=True)
    weights = np.where(mask, np.exp(np.where(mask, logits - shift, 0.0)), 0.0)
    return weights / weights.sum(axis=-1, keepdims=True)


def _check_slope(slope):
    if not 0 < slope < 1:
        e = aw.NumericsError("bad_slope", slope=slope)
        logger.error(e)
        raise e


def leaky_relu(x, slope: float = defaults.leaky_slope):
    """
    x for x >= 0, slope * x otherwise.
    """
    _check_slope(slope)
    x = np.asarray(x, dtype=dtype)
    return np.where(x >= 0, x, slope * x)[()]


def leaky_relu_grad(x, slope: float = defaults.leaky_slope):
    """
    The derivative of ``leaky_relu`` (1 at x = 0).
    """
    x = np.asarray(x, dtype=dtype)
    return np.where(x >= 0, 1.0, slope)[()]


def elu(x, alpha: float = defaults.elu_alpha):
    """
    x for x > 0, alpha * (exp(x) - 1) otherwise.
    """
    x = np.asarray(x, dtype=dtype)
    return np.where(x > 0, x, alpha * np.expm1(np.minimum(x, 0.0)))[()]


def elu_grad(x, alpha: float = defaults.elu_alpha):
    """
    The derivative of ``elu``.
    """
    x = np.asarray(x, dtype=dtype)
    return np.where(x > 0, 1.0, alpha * np.exp(np.minimum(x, 0.0)))[()]


def sigmoid(x):
    return expit(np.asarray(x, dtype=dtype))


def dropout_mask(rng, shape, rate: float):
    """
    Draws an inverted-dropout mask: entries are 0 with probability `rate`
    and 1 / (1 - rate) otherwise, so the expectation of ``x * mask`` is x.

    Parameters
    ----------
    rng : np.random.Generator
        The generator to draw from. No draw happens if `rate` is 0.
    shape : tuple
        The mask shape.
    rate : float
        The drop probability in [0, 1).
    """
    if not 0 <= rate < 1:
        e = aw.NumericsError("bad_rate", rate=rate)
        logger.error(e)
        raise e
    if rate == 0:
        return np.ones(shape, dtype=dtype)
    keep = rng.random(shape) >= rate
    return keep / (1.0 - rate)


def check_finite(value, **attrs):
    """
    Raises a ``NumericsError`` if a loss value is NaN or infinite.
    """
    if not np.isfinite(value):
        e = aw.NumericsError("non_finite_loss", value=value, **attrs)
        logger.critical(e)
        raise e
    return value
