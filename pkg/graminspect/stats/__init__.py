"""
The stats module scores span predictions on the three diagnosis levels (detection,
identification and position). It defines the ``Evaluator`` class, which links a gold corpus
and evaluates prediction sets against it, and stand-alone functions using default instances.
"""

from .Evaluator import Evaluator, EvalReport, LevelCounts, compare, f1, score_spans, gold_items
from .func_api import *

__default_Evaluator__ = Evaluator()
"""The default Evaluator"""
