"""
Defines the `TrainingCurve` class, which plots a training history.
"""

import pandas as pd
import seaborn as sns

import graminspect._auxiliary as aux
import graminspect._auxiliary.warnings as aw
import graminspect.defaults as defaults
import graminspect.Plotters._base as base

logger = aux.default_logger()


class TrainingCurve(base.Plotter):
    """
    Plots the mean training loss per epoch and, if the history holds validation scores,
    the F1 of every evaluation level on a second y-axis.

    Usage
    -----

    .. code-block:: python

        curve = TrainingCurve()
        curve.link(trainer.history())
        fig = curve.plot()
        curve.save("history.png")
    """

    def __init__(self):
        super().__init__(defaults.static_TrainingCurve)

    def link(self, obj):
        """
        Links a training history.

        Parameters
        ----------
        obj : pd.DataFrame or Trainer
            A history with the columns `epoch` and `loss` (and optionally one column per level),
            or a ``Trainer`` whose history is used.
        """
        data = obj.history() if aux.pseudo_isinstance(obj, "Trainer") else obj
        if not isinstance(data, pd.DataFrame) or not {"epoch", "loss"} <= set(data.columns):
            e = aw.PlotterError("unknown_data", obj=type(obj).__name__)
            logger.critical(e)
            raise e
        self._obj = obj
        self._data = data

    def _static_plot(self, **kwargs):
        fig, ax = self._setup_axes(kwargs)
        title, xlabel, ylabel = self._axeslabels(kwargs)
        frame = kwargs.pop("frame", False)
        linewidth = kwargs.pop("linewidth", 1.2)
        palette = sns.color_palette(kwargs.pop("palette", defaults.default_palette), 1 + len(defaults.objectives))

        data = self._data
        ax.plot(data["epoch"], data["loss"], color=palette[0], linewidth=linewidth, label="loss", **kwargs)
        ax.set(title=title, xlabel=xlabel, ylabel=ylabel or "mean NLL")

        levels = [level for level in defaults.objectives if level in data.columns]
        if levels:
            twin = ax.twinx()
            for color, level in zip(palette[1:], levels):
                twin.plot(data["epoch"], data[level], color=color, linewidth=linewidth, linestyle="--", label=defaults.level_names[level])
            twin.set(ylabel="validation F1", ylim=(0, 1.02))
            handles, labels = ax.get_legend_handles_labels()
            more, more_labels = twin.get_legend_handles_labels()
            ax.legend(handles + more, labels + more_labels, frameon=False, loc="center right")

        if not frame:
            self._despine(ax)
        return fig
