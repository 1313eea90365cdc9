"""
This module defines the data model of ``graminspect``: error types, error spans,
sentences with their gold annotation, BIO label sequences, the per-model
``PredictionSet`` and the ``Corpus`` collection that bundles sentences.

Offsets
-------
All spans are stored as 1-based inclusive character offsets, exactly as they appear
in gold corpora and prediction files. Conversion to 0-based array indices only happens
where a span is written into (or read from) a label array.

Labels
------
The nine BIO labels use a fixed index mapping:

+-------+-----+-----+-----+-----+-----+-----+-----+-----+-----+
| label | O   | B-R | I-R | B-M | I-M | B-S | I-S | B-W | I-W |
+=======+=====+=====+=====+=====+=====+=====+=====+=====+=====+
| index | 0   | 1   | 2   | 3   | 4   | 5   | 6   | 7   | 8   |
+-------+-----+-----+-----+-----+-----+-----+-----+-----+-----+

.. code-block:: python

    from graminspect.main.Corpus import ErrorSpan, spans_to_bio, bio_to_spans

    tags = spans_to_bio({ErrorSpan(3, 4, "M")}, 6)
    # O O B-M I-M O O
    spans = bio_to_spans(tags)
"""

import enum
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

import graminspect._auxiliary as aux
import graminspect._auxiliary.warnings as aw
import graminspect.defaults as defaults

logger = aux.default_logger()


class ErrorType(enum.IntEnum):
    """
    The four error categories. The integer value fixes the type order R < M < S < W.
    """

    R = 0
    M = 1
    S = 2
    W = 3

    @classmethod
    def parse(cls, token):
        """
        Converts a type token ("R", "M", "S", "W" or an ``ErrorType``) to an ``ErrorType``.
        """
        if isinstance(token, cls):
            return token
        try:
            return cls[str(token).strip()]
        except KeyError:
            e = aw.CorpusError("unknown_type", type=token, allowed=defaults.error_types)
            logger.error(e)
            raise e from None

    def __str__(self):
        return self.name


LABELS = (defaults.outside_label,) + tuple(f"{prefix}-{t}" for t in defaults.error_types for prefix in ("B", "I"))
"""All nine labels in index order"""

LABEL_INDEX = {label: idx for idx, label in enumerate(LABELS)}
"""label -> index"""

NUM_LABELS = len(LABELS)


def begin_label(type):
    return f"B-{ErrorType.parse(type).name}"


def inside_label(type):
    return f"I-{ErrorType.parse(type).name}"


@dataclass(frozen=True, order=True)
class ErrorSpan:
    """
    A typed error span with 1-based inclusive offsets.

    Parameters
    ----------
    start : int
        The first character of the span (1-based).
    end : int
        The last character of the span (1-based, inclusive).
    type : ErrorType or str
        The error category.
    """

    start: int
    end: int
    type: ErrorType

    def __post_init__(self):
        try:
            start, end = int(self.start), int(self.end)
            integral = start == self.start and end == self.end
        except (TypeError, ValueError):
            integral = False
        if not integral or not 1 <= start <= end:
            e = aw.CorpusError("bad_span", start=self.start, end=self.end, type=self.type)
            logger.error(e)
            raise e
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "end", end)
        object.__setattr__(self, "type", ErrorType.parse(self.type))

    @property
    def width(self):
        """The number of characters covered"""
        return self.end - self.start + 1

    def overlaps(self, other):
        """
        Returns True if the two spans share at least one character.
        """
        return self.start <= other.end and other.start <= self.end

    def check_range(self, n, sid="?"):
        """
        Raises a ``CorpusError`` if the span does not fit into a sentence of length `n`.
        """
        if self.end > n:
            e = aw.CorpusError("span_out_of_range", start=self.start, end=self.end, type=self.type, sid=sid, n=n)
            logger.error(e)
            raise e

    def astuple(self):
        """
        Returns
        -------
        tuple
            ``(start, end, type-token)``
        """
        return (self.start, self.end, self.type.name)

    def __str__(self):
        return f"({self.start}, {self.end}, {self.type.name})"


def _as_spans(spans):
    """
    Coerces an iterable of ``ErrorSpan`` or ``(start, end, type)`` tuples to a frozenset of ``ErrorSpan``.
    """
    return frozenset(s if isinstance(s, ErrorSpan) else ErrorSpan(*s) for s in spans)


@dataclass(frozen=True)
class TagSequence:
    """
    A per-character sequence of BIO labels.
    """

    labels: tuple

    def __post_init__(self):
        labels = tuple(self.labels)
        for label in labels:
            if label not in LABEL_INDEX:
                e = aw.CorpusError("unknown_label", label=label, allowed=LABELS)
                logger.error(e)
                raise e
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_indices(cls, indices):
        """
        Builds a TagSequence from label indices (as produced by Viterbi decoding).
        """
        try:
            return cls(tuple(LABELS[int(i)] for i in indices))
        except IndexError:
            bad = [int(i) for i in indices if not 0 <= int(i) < NUM_LABELS]
            e = aw.CorpusError("unknown_label", label=bad[0], allowed=tuple(range(NUM_LABELS)))
            logger.error(e)
            raise e from None

    def indices(self):
        """
        Returns
        -------
        np.ndarray
            The label indices as an integer array.
        """
        return np.array([LABEL_INDEX[label] for label in self.labels], dtype=np.int64)

    def is_well_formed(self):
        """
        Returns True if every ``I-t`` follows a ``B-t`` or ``I-t`` of the same type.
        """
        previous = defaults.outside_label
        for label in self.labels:
            if label.startswith("I-") and previous[2:] != label[2:]:
                return False
            previous = label
        return True

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __getitem__(self, idx):
        return self.labels[idx]

    def __str__(self):
        return " ".join(self.labels)


@dataclass(frozen=True)
class Sentence:
    """
    A sentence and its gold error spans.

    Parameters
    ----------
    id : str
        The sentence identifier.
    chars : str or sequence of str
        The characters of the sentence.
    gold : set of ErrorSpan
        The gold error spans (may be empty for a correct sentence).
    """

    id: str
    chars: tuple
    gold: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "id", str(self.id))
        object.__setattr__(self, "chars", tuple(self.chars))
        object.__setattr__(self, "gold", _as_spans(self.gold))
        if len(self.chars) == 0:
            e = aw.CorpusError("empty_sentence", sid=self.id)
            logger.error(e)
            raise e
        for span in self.gold:
            span.check_range(len(self.chars), self.id)

        # overlap only matters within one type
        for type in ErrorType:
            spans = sorted(s for s in self.gold if s.type == type)
            for first, second in zip(spans, spans[1:]):
                if first.overlaps(second):
                    e = aw.CorpusError("type_overlap", sid=self.id, first=first, second=second)
                    logger.error(e)
                    raise e

    @property
    def text(self):
        """The sentence as a string"""
        return "".join(self.chars)

    @property
    def n(self):
        """The number of characters"""
        return len(self.chars)

    def __len__(self):
        return len(self.chars)

    def tags(self):
        """
        Returns
        -------
        TagSequence
            The BIO encoding of the (encodable subset of the) gold spans.
        """
        return spans_to_bio(encodable_spans(self.gold, self.id), self.n)


def spans_to_bio(spans, n: int):
    """
    Encodes non-overlapping error spans as a BIO label sequence.

    Parameters
    ----------
    spans : set of ErrorSpan
        Pairwise non-overlapping spans (of any types).
    n : int
        The sentence length.

    Returns
    -------
    TagSequence
    """
    spans = sorted(_as_spans(spans))
    for span in spans:
        span.check_range(n)

    for first, second in zip(spans, spans[1:]):
        if first.overlaps(second):
            e = aw.CorpusError("bio_overlap", first=first, second=second)
            logger.error(e)
            raise e

    labels = [defaults.outside_label] * n
    for span in spans:
        labels[span.start - 1] = begin_label(span.type)
        for p in range(span.start, span.end):
            labels[p] = inside_label(span.type)
    return TagSequence(labels)


def bio_to_spans(tags):
    """
    Decodes a BIO label sequence into error spans.

    Maximal runs of ``B-t I-t ... I-t`` become spans. This never fails:
    an ``I-t`` without a compatible predecessor opens a new span as if it were ``B-t``
    (so a type switch also starts a new span).

    Parameters
    ----------
    tags : TagSequence or sequence of str

    Returns
    -------
    frozenset of ErrorSpan
    """
    if not isinstance(tags, TagSequence):
        tags = TagSequence(tags)

    spans = []
    start, type = None, None

    def close(end):
        if start is not None:
            spans.append(ErrorSpan(start, end, type))

    for p, label in enumerate(tags, start=1):
        if label == defaults.outside_label:
            close(p - 1)
            start, type = None, None
            continue
        prefix, t = label.split("-")
        if prefix == "I" and start is not None and t == type:
            continue
        close(p - 1)
        start, type = p, t
    close(len(tags))
    return frozenset(spans)


def encodable_spans(spans, sid=None):
    """
    Selects the BIO-encodable subset of a span set.

    Spans are visited in (start, end, type) order and kept if they do not overlap any
    span kept before them. Dropped spans are reported through a ``SoftWarning``.

    Parameters
    ----------
    spans : set of ErrorSpan
    sid : str
        The sentence id (only used for reporting).

    Returns
    -------
    frozenset of ErrorSpan
    """
    kept, dropped = [], []
    for span in sorted(_as_spans(spans)):
        if kept and span.start <= kept[-1].end:
            dropped.append(span)
        else:
            kept.append(span)
    if dropped:
        aw.SoftWarning("Corpus:spans_dropped", sid=sid, n=len(dropped), spans=", ".join(str(s) for s in dropped))
    return frozenset(kept)


class PredictionSet:
    """
    The span predictions of one model.

    A sentence that is listed without spans was explicitly predicted correct.
    A sentence that is not listed at all counts as predicted correct as well.

    Parameters
    ----------
    model_id : str
        An identifier of the predicting model.
    spans : dict
        Sentence id -> set of ``ErrorSpan`` (or ``(start, end, type)`` tuples).
    is_lgn : bool
        Marks predictions of a lexicon-graph model (these are excluded from some vote denominators).
    """

    __slots__ = ["model_id", "is_lgn", "_spans"]

    def __init__(self, model_id: str, spans: dict = None, is_lgn: bool = False):
        self.model_id = str(model_id)
        self.is_lgn = bool(is_lgn)
        self._spans = {str(sid): _as_spans(s) for sid, s in (spans or {}).items()}

    def get(self, sid):
        """
        Returns the spans predicted for a sentence (empty if there are none).
        """
        return self._spans.get(sid, frozenset())

    def ids(self):
        """
        Returns the sentence ids listed in the prediction set, sorted.
        """
        return sorted(self._spans)

    def items(self):
        return ((sid, self._spans[sid]) for sid in self.ids())

    def n_spans(self):
        """
        Returns the total number of predicted spans.
        """
        return sum(len(s) for s in self._spans.values())

    def canonical_lines(self):
        """
        Returns the canonical file lines, sorted by (sid, start, end, type).
        Sentences without spans yield a single ``sid<TAB>correct`` line.
        """
        lines = []
        for sid, spans in self.items():
            if not spans:
                lines.append(f"{sid}\t{defaults.correct_token}")
                continue
            for span in sorted(spans):
                lines.append(f"{sid}\t{span.start}\t{span.end}\t{span.type.name}")
        return lines

    def save(self, filename: str):
        """
        Writes the canonical prediction file.
        """
        import graminspect.Readers as Readers

        Readers.write_predictions(self, filename)

    def __contains__(self, sid):
        return sid in self._spans

    def __len__(self):
        return len(self._spans)

    def __eq__(self, other):
        if not isinstance(other, PredictionSet):
            return NotImplemented
        return self._spans == other._spans and self.is_lgn == other.is_lgn

    def __repr__(self):
        lgn = ", lgn" if self.is_lgn else ""
        return f"PredictionSet({self.model_id}{lgn}: {len(self)} sentences, {self.n_spans()} spans)"


class Corpus(aux._ID):
    """
    An ordered collection of ``Sentence`` objects, indexable by position or sentence id.

    Parameters
    ----------
    sentences : list
        A list of ``Sentence`` objects.
    id : str
        An identifier for the corpus.
    """

    def __init__(self, sentences: list = None, id: str = None):
        super().__init__()
        self.id(id)
        self._sentences = []
        self._index = {}
        for sentence in sentences or []:
            self.add(sentence)

    @classmethod
    def read(cls, filename: str):
        """
        Reads a gold corpus file (one JSON record per line).
        """
        import graminspect.Readers as Readers

        return Readers.CorpusReader().pipe(filename)

    def add(self, sentence: Sentence):
        """
        Appends a sentence.
        """
        if sentence.id in self._index:
            e = aw.CorpusError("duplicate_id", sid=sentence.id)
            logger.error(e)
            raise e
        self._index[sentence.id] = len(self._sentences)
        self._sentences.append(sentence)

    def ids(self):
        """
        Returns the sentence ids in corpus order.
        """
        return [s.id for s in self._sentences]

    def get(self, sid):
        """
        Returns the sentence with the given id.
        """
        if sid not in self._index:
            e = aw.CorpusError("unknown_id", sid=sid)
            logger.error(e)
            raise e
        return self._sentences[self._index[sid]]

    def subset(self, ids, id: str = None):
        """
        Returns a new Corpus with the given sentence ids (in the given order).
        """
        return Corpus([self.get(sid) for sid in ids], id=id)

    def split(self, fraction: float = 0.8, seed: int = None):
        """
        Splits the corpus into two random parts.

        Parameters
        ----------
        fraction : float
            The fraction of sentences to put into the first part.
        seed : int
            The seed of the shuffle. By default ``defaults.seed``.

        Returns
        -------
        first, second : Corpus
            Both keep the original relative sentence order.
        """
        if not 0 < fraction < 1:
            e = aw.CorpusError("bad_fraction", fraction=fraction)
            logger.error(e)
            raise e
        import graminspect.numerics as numerics

        seed = defaults.seed if seed is None else seed
        order = numerics.make_rng(seed).permutation(len(self))
        cut = int(round(fraction * len(self)))
        first = sorted(order[:cut])
        second = sorted(order[cut:])
        ids = self.ids()
        return (
            self.subset([ids[i] for i in first], id=f"{self.id()}_a"),
            self.subset([ids[i] for i in second], id=f"{self.id()}_b"),
        )

    def statistics(self):
        """
        Counts the sentences and gold errors per type.

        Returns
        -------
        pd.DataFrame
            One row indexed by the corpus id with the columns
            `Sentences`, `Correct`, `Error`, `R`, `M`, `S`, `W`.
        """
        counts = {t.name: 0 for t in ErrorType}
        correct = 0
        for sentence in self._sentences:
            correct += not sentence.gold
            for span in sentence.gold:
                counts[span.type.name] += 1
        row = dict(Sentences=len(self), Correct=correct, Error=sum(counts.values()), **counts)
        return pd.DataFrame([row], index=pd.Index([str(self.id())], name="corpus"))

    def gold_predictions(self, model_id: str = "gold", is_lgn: bool = False):
        """
        Returns the gold annotation as a ``PredictionSet`` listing every sentence.
        """
        return PredictionSet(model_id, {s.id: s.gold for s in self._sentences}, is_lgn=is_lgn)

    def __len__(self):
        return len(self._sentences)

    def __iter__(self):
        return iter(self._sentences)

    def __contains__(self, sid):
        return sid in self._index

    def __getitem__(self, key):
        if isinstance(key, (int, np.integer)):
            return self._sentences[key]
        return self.get(key)

    def __repr__(self):
        return f"Corpus({self.id()}: {len(self)} sentences)"
