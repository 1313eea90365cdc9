"""
.. _Plotters:

Static figures for ``graminspect`` results. Every Plotter is set up, ``link``-ed to a
data source and then asked to ``plot``; styling arguments can be stored beforehand using
``params`` or passed to ``plot`` directly. The default arguments of every Plotter live in
``graminspect.defaults`` (``static_TrainingCurve``, ``static_ThresholdHeatmap`` and
``static_AttentionHeatmap``), so they can be changed globally.

- ``TrainingCurve`` plots the loss and validation F1 of a ``Trainer`` history.
- ``ThresholdHeatmap`` plots the objective F1 of a threshold search over θ₁ × θ₂.
- ``AttentionHeatmap`` plots the attention coefficients of one GAT head.

.. code-block:: python

    from graminspect.Plotters import TrainingCurve

    curve = TrainingCurve()
    curve.link(history)
    curve.params(title="Variant A", style="ticks")
    fig = curve.plot()
    curve.save("history.png")
"""

from .TrainingCurve import TrainingCurve
from .ThresholdHeatmap import ThresholdHeatmap
from .AttentionHeatmap import AttentionHeatmap
from .func_api import *
