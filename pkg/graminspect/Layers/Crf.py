"""
The linear-chain CRF: path scores, the forward algorithm, exact gradients and Viterbi decoding.

Transitions are stored in a (K+2) x (K+2) matrix ``A`` whose two extra states are
START (index K) and END (index K+1). A label path y_1..y_N scores

.. code-block::

    A[START, y_1] + sum_i A[y_i, y_{i+1}] + A[y_N, END] + sum_i V[i, y_i]

Only the START row, the K x K interior and the END column of ``A`` are ever used.
"""

import numpy as np

import graminspect._auxiliary as aux
import graminspect._auxiliary.warnings as aw
from graminspect.Layers._base import Layer
from graminspect.numerics import log_sum_exp

logger = aux.default_logger()


def _check(V, A):
    V = np.asarray(V, dtype=np.float64)
    A = np.asarray(A, dtype=np.float64)
    if V.ndim != 2 or V.shape[0] == 0:
        e = aw.CrfError("empty")
        logger.error(e)
        raise e
    k = V.shape[1]
    if A.shape != (k + 2, k + 2):
        e = aw.CrfError("bad_transitions", k=k, k2=k + 2, shape=A.shape)
        logger.error(e)
        raise e
    return V, A, k


def _path(Y, n):
    if hasattr(Y, "indices"):
        Y = Y.indices()
    Y = np.asarray(Y, dtype=np.int64)
    if len(Y) != n:
        e = aw.CrfError("length_mismatch", n_tags=len(Y), n=n)
        logger.error(e)
        raise e
    return Y


def _split(A, k):
    return A[k, :k], A[:k, :k], A[:k, k + 1]


def crf_score(V, Y, A):
    """
    Scores one label path.

    Parameters
    ----------
    V : np.ndarray
        The emissions (N x K).
    Y : TagSequence or sequence of int
        The label path (label indices).
    A : np.ndarray
        The augmented transitions ((K+2) x (K+2)).

    Returns
    -------
    float
    """
    V, A, k = _check(V, A)
    Y = _path(Y, V.shape[0])
    start, trans, end = _split(A, k)
    score = start[Y[0]] + end[Y[-1]] + V[np.arange(len(Y)), Y].sum()
    score += trans[Y[:-1], Y[1:]].sum()
    return float(score)


def _forward(V, start, trans):
    n, k = V.shape
    alpha = np.empty((n, k))
    alpha[0] = start + V[0]
    for i in range(1, n):
        alpha[i] = log_sum_exp(alpha[i - 1][:, None] + trans, axis=0) + V[i]
    return alpha


def _backward(V, trans, end):
    n, k = V.shape
    beta = np.empty((n, k))
    beta[-1] = end
    for i in range(n - 2, -1, -1):
        beta[i] = log_sum_exp(trans + (V[i + 1] + beta[i + 1])[None, :], axis=1)
    return beta


def crf_log_partition(V, A):
    """
    The log of the sum of exp(score) over all K^N label paths (forward algorithm).

    Parameters
    ----------
    V : np.ndarray
        The emissions (N x K), N >= 1.
    A : np.ndarray
        The augmented transitions.

    Returns
    -------
    float
    """
    V, A, k = _check(V, A)
    start, trans, end = _split(A, k)
    alpha = _forward(V, start, trans)
    return float(log_sum_exp(alpha[-1] + end))


def crf_marginals(V, A):
    """
    Computes the unary and pairwise label marginals.

    Returns
    -------
    log_z : float
        The log partition.
    unary : np.ndarray
        p(y_i = k), shape N x K.
    pairwise : np.ndarray
        p(y_i = j, y_{i+1} = k), shape (N-1) x K x K.
    """
    V, A, k = _check(V, A)
    start, trans, end = _split(A, k)
    alpha = _forward(V, start, trans)
    beta = _backward(V, trans, end)
    log_z = float(log_sum_exp(alpha[-1] + end))
    unary = np.exp(alpha + beta - log_z)
    pairwise = np.exp(alpha[:-1, :, None] + trans[None, :, :] + (V[1:] + beta[1:])[:, None, :] - log_z)
    return log_z, unary, pairwise


def crf_nll(V, Y, A):
    """
    The negative log-likelihood of a label path and its gradients.

    Parameters
    ----------
    V : np.ndarray
        The emissions (N x K).
    Y : TagSequence or sequence of int
        The gold label path.
    A : np.ndarray
        The augmented transitions.

    Returns
    -------
    loss : float
        log Z - score(Y) (never negative).
    dV : np.ndarray
        marginals - one-hot(Y), shape N x K.
    dA : np.ndarray
        expected - observed transition counts, shape (K+2) x (K+2).
    """
    V, A, k = _check(V, A)
    Y = _path(Y, V.shape[0])
    n = V.shape[0]
    log_z, unary, pairwise = crf_marginals(V, A)
    loss = log_z - crf_score(V, Y, A)

    onehot = np.zeros_like(V)
    onehot[np.arange(n), Y] = 1.0
    dV = unary - onehot

    dA = np.zeros_like(A)
    dA[k, :k] = unary[0] - onehot[0]
    dA[:k, k + 1] = unary[-1] - onehot[-1]
    dA[:k, :k] = pairwise.sum(axis=0)
    np.subtract.at(dA, (Y[:-1], Y[1:]), 1.0)
    return max(loss, 0.0), dV, dA


def viterbi_decode(V, A):
    """
    Finds the highest scoring label path.

    Ties are broken towards the smallest label index at every step.

    Parameters
    ----------
    V : np.ndarray
        The emissions (N x K).
    A : np.ndarray
        The augmented transitions.

    Returns
    -------
    np.ndarray
        The label indices of the best path.
    """
    V, A, k = _check(V, A)
    start, trans, end = _split(A, k)
    n = V.shape[0]
    delta = start + V[0]
    pointers = np.zeros((n, k), dtype=np.int64)
    for i in range(1, n):
        candidates = delta[:, None] + trans
        pointers[i] = np.argmax(candidates, axis=0)
        delta = candidates[pointers[i], np.arange(k)] + V[i]
    path = np.empty(n, dtype=np.int64)
    path[-1] = np.argmax(delta + end)
    for i in range(n - 1, 0, -1):
        path[i - 1] = pointers[i, path[i]]
    return path


class CrfLayer(Layer):
    """
    Holds the augmented transition matrix ``<prefix>.A`` in a ``ParamStore``.

    Parameters
    ----------
    prefix : str
    k : int
        The number of labels.
    """

    __slots__ = ["k"]

    _Error = aw.CrfError

    def __init__(self, prefix: str, k: int):
        super().__init__(prefix)
        self.k = k

    def _params(self):
        return ["A"]

    def init(self, store, rng, scale: float):
        store.zeros(self.name("A"), (self.k + 2, self.k + 2))

    def nll(self, store, V, Y, grads: dict = None):
        """
        Returns the loss and dV; dA is accumulated into `grads` (if given).
        """
        loss, dV, dA = crf_nll(V, Y, store[self.name("A")])
        if grads is not None:
            self._accumulate(grads, self.name("A"), dA)
        return loss, dV

    def decode(self, store, V):
        return viterbi_decode(V, store[self.name("A")])
