"""
Defines the `ThresholdHeatmap` class, which is used to preview a threshold search.
"""

import numpy as np
import pandas as pd
import seaborn as sns

import graminspect._auxiliary as aux
import graminspect._auxiliary.warnings as aw
import graminspect.defaults as defaults
import graminspect.Plotters._base as base
from graminspect.Ensemble.Tuner import REPORT_COLUMNS

logger = aux.default_logger()


class ThresholdHeatmap(base.Plotter):
    """
    Shows the objective F1 over the θ₁ × θ₂ grid at the best θ₃ of a tuning table
    (as returned by ``tune_thresholds``).

    Parameters
    ----------
    objective : str
        The level to show. By default ``defaults.default_objective``.
    """

    __slots__ = ["_objective", "_theta3"]

    def __init__(self, objective: str = defaults.default_objective):
        super().__init__(defaults.static_ThresholdHeatmap)
        if objective not in defaults.objectives:
            e = aw.EnsembleError("unknown_objective", objective=objective, allowed=defaults.objectives)
            logger.error(e)
            raise e
        self._objective = objective
        self._theta3 = None

    def link(self, obj: pd.DataFrame):
        """
        Links a tuning table and pivots the slice at the best θ₃.
        """
        if not isinstance(obj, pd.DataFrame) or not set(REPORT_COLUMNS) <= set(obj.columns) or obj.empty:
            e = aw.PlotterError("unknown_data", obj=type(obj).__name__)
            logger.critical(e)
            raise e
        self._obj = obj
        # the first maximum in grid order, as selected by the tuner
        best = obj.iloc[int(np.argmax(obj[self._objective].to_numpy()))]
        self._theta3 = float(best["theta3"])
        sliced = obj[np.isclose(obj["theta3"], self._theta3)]
        self._data = sliced.pivot(index="theta1", columns="theta2", values=self._objective).sort_index(ascending=False)

    def theta3(self):
        """The θ₃ of the shown slice"""
        return self._theta3

    def _static_plot(self, **kwargs):
        fig, ax = self._setup_axes(kwargs)
        title, xlabel, ylabel = self._axeslabels(kwargs)
        kwargs.setdefault("cmap", defaults.default_palette)
        kwargs["cbar_kws"] = dict(kwargs.get("cbar_kws", {}))
        kwargs["cbar_kws"]["label"] = f"{defaults.level_names[self._objective]} F1"

        data = self._data
        kwargs.setdefault("xticklabels", [f"{v:.2f}" for v in data.columns])
        kwargs.setdefault("yticklabels", [f"{v:.2f}" for v in data.index])
        sns.heatmap(data, ax=ax, vmin=0, vmax=1, **kwargs)
        ax.set(title=f"{title} (theta3 = {self._theta3:.2f})" if title else None, xlabel=xlabel, ylabel=ylabel)
        return fig
