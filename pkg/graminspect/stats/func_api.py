"""
This module defines stand-alone functions for scoring span predictions.
"""

import graminspect.stats as stats
from graminspect.stats.Evaluator import Evaluator, compare, f1


def evaluate(predictions, gold):
    """
    Scores a ``PredictionSet`` against a gold ``Corpus`` on the detection,
    identification and position levels.

    Parameters
    ----------
    predictions : PredictionSet
        Every listed sentence id must exist in `gold`. Unlisted sentences count as predicted correct.
    gold : Corpus

    Returns
    -------
    EvalReport
    """
    return stats.__default_Evaluator__.pipe(predictions, gold)


def evaluate_many(predictions: list, gold):
    """
    Scores several prediction sets and tabulates them.

    Returns
    -------
    reports : list
    table : pd.DataFrame
        See ``compare``.
    """
    evaluator = Evaluator()
    evaluator.link(gold)
    reports = [evaluator.pipe(p) for p in predictions]
    return reports, compare(reports)
