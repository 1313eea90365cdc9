"""
These are the stand-alone methods for producing the graminspect figures.
"""

import graminspect.defaults as defaults
from graminspect.Plotters.AttentionHeatmap import AttentionHeatmap
from graminspect.Plotters.ThresholdHeatmap import ThresholdHeatmap
from graminspect.Plotters.TrainingCurve import TrainingCurve


def _draw(plotter, filename, kwargs):
    fig = plotter.plot(**kwargs)
    if filename is not None:
        plotter.save(filename)
    return fig


def plot_history(history, filename: str = None, **kwargs):
    """
    Plots a training history.

    Parameters
    ----------
    history : pd.DataFrame or Trainer
        The history (columns `epoch`, `loss` and optionally the per-level F1).
    filename : str
        Saves the figure to this file (if given).
    **kwargs
        Any additional plotting keyword arguments.

    Returns
    -------
    fig
    """
    plotter = TrainingCurve()
    plotter.link(history)
    return _draw(plotter, filename, kwargs)


def plot_thresholds(table, objective: str = defaults.default_objective, filename: str = None, **kwargs):
    """
    Plots the objective F1 of a tuning table over θ₁ × θ₂ at the best θ₃.
    """
    plotter = ThresholdHeatmap(objective)
    plotter.link(table)
    return _draw(plotter, filename, kwargs)


def plot_attention(tagger, sentence, graph, layer: int = 1, head: int = 0, filename: str = None, **kwargs):
    """
    Plots the attention coefficients of one GAT head on one sentence.
    """
    plotter = AttentionHeatmap()
    plotter.link(tagger, sentence, graph, layer=layer, head=head)
    return _draw(plotter, filename, kwargs)
