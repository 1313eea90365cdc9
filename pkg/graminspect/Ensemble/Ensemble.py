"""
The three-stage voting ensemble over span predictions of many models.

For every sentence, with N the number of non-LGN models:

1. **Type presence.** If more than θ₁·N non-LGN models predict at least one error of
   type t, the largest span of type t among the predictions of *all* models is emitted.
2. **Exact-span vote.** A span predicted by some LGN model is voted on by all models,
   any other span only by the non-LGN models; it is emitted if more than θ₂ times the
   number of voters predict it.
3. **Existence fallback.** If stages 1 and 2 emitted nothing but the non-LGN models
   predicted more than θ₃·N errors in total, the single span with the most votes
   (over all models) is emitted.

The output is the deduplicated union of the emitted spans. LGN models are the
lexicon-graph models whose predictions are marked with ``is_lgn``.
"""

from dataclasses import dataclass, replace

import graminspect._auxiliary as aux
import graminspect._auxiliary.warnings as aw
import graminspect.defaults as defaults
from graminspect.main.Corpus import ErrorType, PredictionSet

logger = aux.default_logger()

TIE_BREAKS = ("width", "votes")


@dataclass(frozen=True)
class EnsembleConfig:
    """
    The ensemble thresholds.

    Attributes
    ----------
    theta1, theta2, theta3 : float
        The vote fractions of the three stages, each in [0, 1].
    tie_break : str
        How stage 1 picks the largest span: "width" (widest, then most votes) or
        "votes" (most votes, then widest). Remaining ties go to the smaller start.
    objective : str
        The evaluation level optimised by ``tune_thresholds``.
    """

    theta1: float = defaults.thetas[0]
    theta2: float = defaults.thetas[1]
    theta3: float = defaults.thetas[2]
    tie_break: str = defaults.tie_break
    objective: str = defaults.default_objective

    def __post_init__(self):
        for name in ("theta1", "theta2", "theta3"):
            value = getattr(self, name)
            if not 0 <= value <= 1:
                e = aw.EnsembleError("bad_theta", name=name, value=value)
                logger.error(e)
                raise e
        if self.tie_break not in TIE_BREAKS:
            e = aw.EnsembleError("unknown_tie_break", policy=self.tie_break, allowed=TIE_BREAKS)
            logger.error(e)
            raise e
        if self.objective not in defaults.objectives:
            e = aw.EnsembleError("unknown_objective", objective=self.objective, allowed=defaults.objectives)
            logger.error(e)
            raise e

    @property
    def thetas(self):
        return (self.theta1, self.theta2, self.theta3)

    def replace(self, **changes):
        return replace(self, **changes)


class VoteTally:
    """
    The vote counts of one sentence.

    Attributes
    ----------
    n_models : int
        The number of non-LGN models.
    n_lgn : int
        The number of LGN models.
    type_models : dict
        ErrorType -> number of non-LGN models predicting at least one error of that type.
    span_votes : dict
        ErrorSpan -> (non-LGN supporters, LGN supporters).
    total_errors : int
        The number of spans predicted by all non-LGN models together.
    """

    __slots__ = ["sid", "n_models", "n_lgn", "type_models", "span_votes", "total_errors"]

    def __init__(self, predictions: list, sid: str):
        self.sid = sid
        self.n_models = sum(not p.is_lgn for p in predictions)
        self.n_lgn = len(predictions) - self.n_models
        self.type_models = {t: 0 for t in ErrorType}
        self.span_votes = {}
        self.total_errors = 0
        for p in predictions:
            spans = p.get(sid)
            if not p.is_lgn:
                self.total_errors += len(spans)
                for t in {s.type for s in spans}:
                    self.type_models[t] += 1
            for span in spans:
                non_lgn, lgn = self.span_votes.get(span, (0, 0))
                self.span_votes[span] = (non_lgn + (not p.is_lgn), lgn + p.is_lgn)

    def votes(self, span):
        """The number of models (LGN or not) predicting `span`"""
        return sum(self.span_votes.get(span, (0, 0)))

    def largest(self, type, tie_break: str = defaults.tie_break):
        """
        Returns the largest span of a type among all predictions (None if there is none).
        """
        candidates = [s for s in self.span_votes if s.type == type]
        if not candidates:
            return None
        if tie_break == "votes":
            key = lambda s: (-self.votes(s), -s.width, s.start, s.end)
        else:
            key = lambda s: (-s.width, -self.votes(s), s.start, s.end)
        return min(candidates, key=key)

    def stage1(self, theta1: float, tie_break: str = defaults.tie_break):
        spans = set()
        for t in ErrorType:
            if self.type_models[t] > theta1 * self.n_models:
                span = self.largest(t, tie_break)
                if span is not None:
                    spans.add(span)
        return spans

    def stage2(self, theta2: float):
        spans = set()
        for span, (non_lgn, lgn) in self.span_votes.items():
            if lgn > 0:
                voters, support = self.n_models + self.n_lgn, non_lgn + lgn
            else:
                voters, support = self.n_models, non_lgn
            if support > theta2 * voters:
                spans.add(span)
        return spans

    def fallback(self):
        """
        Returns the most voted span (ties: wider, then smaller start, then type order).
        """
        if not self.span_votes:
            return None
        return min(self.span_votes, key=lambda s: (-self.votes(s), -s.width, s.start, s.type, s.end))

    def stage3(self, theta3: float):
        if self.total_errors > theta3 * self.n_models:
            span = self.fallback()
            return {span} if span is not None else set()
        return set()

    def to_dict(self):
        return {
            "n_models": self.n_models,
            "n_lgn": self.n_lgn,
            "type_models": {t.name: n for t, n in self.type_models.items()},
            "span_votes": {str(s): v for s, v in sorted(self.span_votes.items())},
            "total_errors": self.total_errors,
        }


def _check_models(predictions):
    if not any(not p.is_lgn for p in predictions):
        e = aw.EnsembleError("no_models")
        logger.error(e)
        raise e


def ensemble_sentence(predictions: list, sid: str, config: EnsembleConfig = None):
    """
    Ensembles the predictions of one sentence.

    Parameters
    ----------
    predictions : list
        ``PredictionSet`` objects (at least one must be non-LGN).
    sid : str
        The sentence id.
    config : EnsembleConfig
        The thresholds. By default ``defaults.thetas``.

    Returns
    -------
    frozenset of ErrorSpan
    """
    config = EnsembleConfig() if config is None else config
    _check_models(predictions)
    tally = VoteTally(predictions, sid)
    spans = tally.stage1(config.theta1, config.tie_break) | tally.stage2(config.theta2)
    if not spans:
        spans = tally.stage3(config.theta3)
    return frozenset(spans)


class Ensembler(aux._ID):
    """
    Ensembles whole prediction sets.

    Parameters
    ----------
    config : EnsembleConfig
        The thresholds. By default ``defaults.thetas``.

    Usage
    -----

    .. code-block:: python

        ensembler = Ensembler(EnsembleConfig(0.6, 0.5, 0.5))
        ensembler.link(predictions)
        result = ensembler.pipe()
    """

    __slots__ = ["_config", "_predictions", "_result"]

    def __init__(self, config: EnsembleConfig = None, id: str = "ensemble"):
        super().__init__()
        self.id(id)
        self._config = EnsembleConfig() if config is None else config
        self._predictions = []
        self._result = None

    @property
    def config(self):
        return self._config

    def link(self, predictions: list):
        """
        Links the prediction sets of the member models.
        """
        predictions = list(predictions)
        _check_models(predictions)
        self._predictions = predictions

    def ids(self):
        """
        Returns every sentence id listed by any member model (sorted).
        """
        return sorted({sid for p in self._predictions for sid in p.ids()})

    def tally(self, sid: str):
        return VoteTally(self._predictions, sid)

    def get(self):
        return self._result

    def pipe(self, predictions: list = None):
        """
        Ensembles every sentence listed by any member model.

        Returns
        -------
        PredictionSet
            Lists every such sentence (empty span sets mark sentences predicted correct).
        """
        if predictions is not None:
            self.link(predictions)
        spans = {sid: ensemble_sentence(self._predictions, sid, self._config) for sid in self.ids()}
        self._result = PredictionSet(self.id(), spans)
        logger.info(f"Ensembled {len(self._predictions)} models over {len(spans)} sentences with thetas {self._config.thetas}.")
        return self._result
