"""
This is the ``graminspect.Evaluator`` that scores span predictions against a gold corpus
on the three levels of grammatical error diagnosis:

- `detection`: is a sentence erroneous? (items = sentence ids with at least one span)
- `identification`: which error types does it contain? (items = (sid, type) pairs)
- `position`: exactly which spans? (items = (sid, start, end, type) tuples)

Each level compares two item *sets*, so repeated spans add nothing and the order of
sentences does not matter. Precision and recall are 0 when their denominator is 0,
and F1 is 0 when both are 0.
"""

from dataclasses import dataclass

import pandas as pd

import graminspect._auxiliary as aux
import graminspect._auxiliary.warnings as aw
import graminspect.defaults as defaults
from graminspect.main.Corpus import PredictionSet

logger = aux.default_logger()

LEVELS = defaults.objectives


def f1(precision: float, recall: float):
    """
    The harmonic mean of precision and recall (0 if both are 0).

    Parameters
    ----------
    precision : float
        In [0, 1].
    recall : float
        In [0, 1].
    """
    if not (0 <= precision <= 1 and 0 <= recall <= 1):
        e = aw.EvaluatorError("out_of_range", precision=precision, recall=recall)
        logger.error(e)
        raise e
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


@dataclass(frozen=True)
class LevelCounts:
    """
    True positives, false positives and false negatives of one level.
    """

    tp: int = 0
    fp: int = 0
    fn: int = 0

    @property
    def precision(self):
        return self.tp / (self.tp + self.fp) if self.tp + self.fp else 0.0

    @property
    def recall(self):
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else 0.0

    @property
    def f1(self):
        return f1(self.precision, self.recall)

    def __add__(self, other):
        return LevelCounts(self.tp + other.tp, self.fp + other.fp, self.fn + other.fn)

    @classmethod
    def compare(cls, predicted: set, gold: set):
        tp = len(predicted & gold)
        return cls(tp=tp, fp=len(predicted) - tp, fn=len(gold) - tp)


class EvalReport:
    """
    Precision, recall and F1 with the raw counts of all three levels.

    Parameters
    ----------
    counts : dict
        level -> LevelCounts
    model_id : str
        The evaluated model.
    """

    __slots__ = ["counts", "model_id"]

    def __init__(self, counts: dict, model_id: str = "model"):
        self.counts = dict(counts)
        self.model_id = model_id

    def precision(self, level: str):
        return self.counts[level].precision

    def recall(self, level: str):
        return self.counts[level].recall

    def f1(self, level: str):
        return self.counts[level].f1

    def to_df(self):
        """
        Returns
        -------
        pd.DataFrame
            One row per level with `level`, `precision`, `recall`, `f1`, `tp`, `fp`, `fn`.
        """
        rows = []
        for level in LEVELS:
            c = self.counts[level]
            rows.append(dict(level=level, precision=c.precision, recall=c.recall, f1=c.f1, tp=c.tp, fp=c.fp, fn=c.fn))
        return pd.DataFrame(rows, columns=["level", "precision", "recall", "f1", "tp", "fp", "fn"])

    def save(self, filename: str):
        """
        Writes the report as TSV (four decimals for the rates).
        """
        self.to_df().to_csv(filename, sep="\t", index=False, float_format=f"%.{defaults.report_digits}f", lineterminator="\n")

    def table(self):
        """
        Returns a human-readable table with one column group per level.
        """
        return compare([self]).to_string(float_format=lambda x: f"{x:.{defaults.report_digits}f}")

    def __str__(self):
        return self.table()

    def __repr__(self):
        return f"EvalReport({self.model_id}: " + ", ".join(f"{level} F1 {self.f1(level):.4f}" for level in LEVELS) + ")"


def _items(spans: dict):
    """
    Maps sid -> spans onto the item sets of all three levels.
    """
    detection, identification, position = set(), set(), set()
    for sid, s in spans.items():
        if not s:
            continue
        detection.add(sid)
        for span in s:
            identification.add((sid, span.type))
            position.add((sid, span.start, span.end, span.type))
    return {"detection": detection, "identification": identification, "position": position}


def gold_items(gold):
    """
    Returns the item sets of a gold corpus (reusable across many evaluations).
    """
    return _items({s.id: s.gold for s in gold})


def score_spans(spans: dict, gold, model_id: str = "model", gold_sets: dict = None):
    """
    Scores a sid -> span set mapping.

    Parameters
    ----------
    spans : dict
        sentence id -> set of ErrorSpan. Sentences that are not listed count as predicted correct.
    gold : Corpus
    model_id : str
    gold_sets : dict
        Precomputed ``gold_items(gold)``.

    Returns
    -------
    EvalReport
    """
    for sid in spans:
        if sid not in gold:
            e = aw.EvaluatorError("unknown_id", sid=sid)
            logger.error(e)
            raise e
    gold_sets = gold_items(gold) if gold_sets is None else gold_sets
    predicted = _items(spans)
    counts = {level: LevelCounts.compare(predicted[level], gold_sets[level]) for level in LEVELS}
    return EvalReport(counts, model_id=model_id)


def compare(reports: list):
    """
    Tabulates several reports.

    Returns
    -------
    pd.DataFrame
        One row per model; the columns are a (level, metric) MultiIndex with the levels
        Detection, Identification and Position and the metrics Precision, Recall and F1.
    """
    columns = pd.MultiIndex.from_product([[defaults.level_names[l] for l in LEVELS], ["Precision", "Recall", "F1"]])
    rows = [[v for level in LEVELS for v in (r.precision(level), r.recall(level), r.f1(level))] for r in reports]
    return pd.DataFrame(rows, columns=columns, index=pd.Index([r.model_id for r in reports], name="model"))


class Evaluator(aux._ID):
    """
    Scores ``PredictionSet`` objects against a linked gold corpus.

    Usage
    -----

    .. code-block:: python

        evaluator = Evaluator()
        evaluator.link(gold)
        report = evaluator.pipe(predictions)
    """

    __slots__ = ["_gold", "_gold_sets", "_results"]

    def __init__(self, id: str = None):
        super().__init__()
        self.id(id)
        self._gold = None
        self._gold_sets = None
        self._results = []

    def link(self, gold):
        """
        Links the gold corpus.
        """
        self._gold = gold
        self._gold_sets = gold_items(gold)

    def get(self):
        """
        Returns
        -------
        list
            All reports computed since the last ``link``.
        """
        return self._results

    def pipe(self, predictions: PredictionSet, gold=None):
        """
        Evaluates one prediction set.

        Parameters
        ----------
        predictions : PredictionSet
        gold : Corpus
            Links a new gold corpus first (if given).

        Returns
        -------
        EvalReport
        """
        if gold is not None:
            self.link(gold)
            self._results = []
        report = score_spans(dict(predictions.items()), self._gold, model_id=predictions.model_id, gold_sets=self._gold_sets)
        self._results.append(report)
        return report

    def table(self):
        """
        Returns the comparison table of all reports computed so far.
        """
        return compare(self._results)
