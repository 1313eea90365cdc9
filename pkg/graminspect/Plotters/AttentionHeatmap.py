"""
Defines the `AttentionHeatmap` class, which shows what one GAT head attends to.
"""

import numpy as np
import pandas as pd
import seaborn as sns

import graminspect._auxiliary as aux
import graminspect._auxiliary.warnings as aw
import graminspect.defaults as defaults
import graminspect.Plotters._base as base

logger = aux.default_logger()


class AttentionHeatmap(base.Plotter):
    """
    Shows the attention coefficients of one GAT head on one sentence: row i holds the
    weights character i gives to its graph neighbours.

    Usage
    -----

    .. code-block:: python

        heatmap = AttentionHeatmap()
        heatmap.link(tagger, sentence, graph, layer=1, head=0)
        fig = heatmap.plot()
    """

    def __init__(self):
        super().__init__(defaults.static_AttentionHeatmap)

    def link(self, obj, sentence=None, graph=None, layer: int = 1, head: int = 0):
        """
        Links either a ``Tagger`` (with a sentence and its graph) or a ready-made N x N
        DataFrame of attention coefficients.

        Parameters
        ----------
        obj : Tagger or pd.DataFrame
        sentence : Sentence
            Provides the characters used as tick labels.
        graph : CharGraph
        layer : int
            The GAT layer (1-based).
        head : int
            The head index (0-based).
        """
        if isinstance(obj, pd.DataFrame):
            self._obj, self._data = obj, obj
            return
        if not aux.pseudo_isinstance(obj, "Tagger") or sentence is None or graph is None:
            e = aw.PlotterError("unknown_data", obj=type(obj).__name__)
            logger.critical(e)
            raise e
        alpha = obj.attention(sentence, graph, layer=layer, head=head)
        labels = [f"{c}{i}" for i, c in enumerate(sentence.chars, start=1)]
        self._obj = obj
        self._data = pd.DataFrame(np.asarray(alpha), index=labels, columns=labels)

    def _static_plot(self, **kwargs):
        fig, ax = self._setup_axes(kwargs)
        title, xlabel, ylabel = self._axeslabels(kwargs)
        kwargs.setdefault("cmap", defaults.default_palette)
        kwargs.setdefault("square", True)
        sns.heatmap(self._data, ax=ax, vmin=0, vmax=1, xticklabels=True, yticklabels=True, **kwargs)
        ax.set(title=title, xlabel=xlabel, ylabel=ylabel)
        return fig
