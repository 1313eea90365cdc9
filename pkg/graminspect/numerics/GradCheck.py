"""
Central finite-difference verification of hand-derived gradients.

.. code-block:: python

    from graminspect.numerics import finite_diff_check

    params = {"w": np.array([3.0])}
    report = finite_diff_check(lambda p: float(p["w"] @ p["w"]), params, {"w": 2 * params["w"]})
    assert report.passed
"""

from dataclasses import dataclass

import numpy as np
import pandas as pd

import graminspect._auxiliary as aux
import graminspect._auxiliary.warnings as aw
import graminspect.defaults as defaults

logger = aux.default_logger()


@dataclass(frozen=True)
class GradCheckReport:
    """
    The outcome of a gradient check.

    Attributes
    ----------
    max_rel_error : float
        The largest relative error over all probed coordinates.
    worst : tuple
        (parameter name, index) of the coordinate with the largest error.
    analytic : float
        The analytic derivative at the worst coordinate.
    numeric : float
        The central-difference estimate at the worst coordinate.
    tol : float
        The tolerance the check was run with.
    n_probed : int
        The number of probed coordinates.
    table : pd.DataFrame
        One row per probed coordinate (name, index, analytic, numeric, rel_error).
    """

    max_rel_error: float
    worst: tuple
    analytic: float
    numeric: float
    tol: float
    n_probed: int
    table: pd.DataFrame

    @property
    def passed(self):
        return self.max_rel_error < self.tol

    def __str__(self):
        status = "passed" if self.passed else "FAILED"
        name, index = self.worst
        return (
            f"gradient check {status}: max relative error {self.max_rel_error:.3e} "
            f"at {name}{list(index)} (analytic {self.analytic:.6e}, numeric {self.numeric:.6e}, tol {self.tol:g})"
        )


def relative_error(analytic, numeric, floor: float = defaults.gradcheck_floor):
    return abs(analytic - numeric) / max(abs(analytic), abs(numeric), floor)


def finite_diff_check(f, params: dict, analytic: dict, h: float = defaults.gradcheck_step, tol: float = defaults.gradcheck_tol, max_coords: int = None, rng=None):
    """
    Compares analytic gradients against central differences.

    Parameters
    ----------
    f : callable
        Maps the `params` dict to a scalar. It is evaluated with one coordinate
        perturbed in place (and restored afterwards).
    params : dict
        name -> array. Arrays are perturbed in place.
    analytic : dict
        name -> analytic gradient array. Only names listed here are probed.
    h : float
        The central-difference step.
    tol : float
        The maximal relative error that still passes.
    max_coords : int
        If given, at most this many coordinates per parameter are probed
        (drawn with `rng`).
    rng : np.random.Generator
        The generator choosing probe coordinates when `max_coords` is set.

    Returns
    -------
    GradCheckReport
    """
    rows = []
    for name, grad in analytic.items():
        param = params[name]
        if np.shape(param) != np.shape(grad):
            e = aw.NumericsError("shape_mismatch", name=name, pshape=np.shape(param), gshape=np.shape(grad))
            logger.error(e)
            raise e
        for index in _coordinates(param.shape, max_coords, rng):
            original = param[index]
            param[index] = original + h
            f_plus = _probe(f, params, name, index)
            param[index] = original - h
            f_minus = _probe(f, params, name, index)
            param[index] = original
            numeric = (f_plus - f_minus) / (2.0 * h)
            rows.append((name, index, float(grad[index]), numeric, relative_error(float(grad[index]), numeric)))

    table = pd.DataFrame(rows, columns=["name", "index", "analytic", "numeric", "rel_error"])
    if table.empty:
        return GradCheckReport(0.0, ("", ()), 0.0, 0.0, tol, 0, table)
    worst = table["rel_error"].idxmax()
    name, index, a, n, err = table.loc[worst]
    report = GradCheckReport(float(err), (name, index), float(a), float(n), tol, len(table), table)
    logger.debug(str(report))
    return report


def _coordinates(shape, max_coords, rng):
    coords = list(np.ndindex(*shape))
    if max_coords is not None and len(coords) > max_coords:
        rng = np.random.default_rng(defaults.seed) if rng is None else rng
        picks = rng.choice(len(coords), size=max_coords, replace=False)
        coords = [coords[i] for i in sorted(picks)]
    return coords


def _probe(f, params, name, index):
    value = float(f(params))
    if not np.isfinite(value):
        e = aw.NumericsError("non_finite", name=name, index=list(index), value=value)
        logger.error(e)
        raise e
    return value
