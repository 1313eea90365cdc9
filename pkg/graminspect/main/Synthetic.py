"""
Generates rule-injected learner corpora for desk-scale experiments.

Sentences are assembled from a small vocabulary following the pattern
``[time] subject [adverb] verb object 。`` and a random subset of them receives one
grammatical error:

- ``R`` inserts a redundant particle between two words (the span covers the particle),
- ``M`` deletes a word and anchors a width-1 span on the character that follows the gap,
- ``S`` substitutes a word by a confusable one (the span covers the substitute),
- ``W`` swaps two adjacent words (the span covers both).

Every sentence comes with a dependency parse of its surface words (the verb heads the
sentence, the remaining words attach in a chain towards it) and the generator provides the
lexicon of all multi-character vocabulary words, so any model variant can be trained on the output.
The output depends on nothing but the seed.

.. code-block:: python

    from graminspect.main.Synthetic import Generator

    data = Generator(seed=7).generate(200)
    data.corpus.statistics()
"""

from dataclasses import dataclass

import graminspect._auxiliary as aux
import graminspect.defaults as defaults
from graminspect.Graphs import DependencyParse, Lexicon
from graminspect.main.Corpus import Corpus, ErrorSpan, Sentence
from graminspect.numerics import make_rng

logger = aux.default_logger()

TIMES = ("今天", "昨天", "明天", "周末")
SUBJECTS = ("我", "他", "她", "我们", "老师", "学生", "妈妈", "朋友")
ADVERBS = ("经常", "已经", "非常", "一起", "常常")
VERBS = ("喜欢", "学习", "参观", "离开", "看", "买", "打扫", "练习")
OBJECTS = ("汉语", "电影", "苹果", "北京", "机场", "博物馆", "房间", "书法")
PARTICLES = ("了", "的", "着", "地", "把")
PUNCT = "。"

CONFUSABLES = {
    "喜欢": "欢喜",
    "参观": "访问",
    "已经": "曾经",
    "经常": "平常",
    "常常": "往往",
    "看": "见",
    "买": "卖",
    "离开": "离去",
    "学习": "学会",
    "房间": "房子",
}
"""word -> a confusable word of a different meaning"""

_RELATIONS = {"time": "ADV", "subject": "SBV", "adverb": "ADV", "verb": "HED", "object": "VOB", "particle": "RAD", "punct": "WP"}

TAXONOMY_EXAMPLES = [
    Sentence("tax-M", "在我看来，我觉得结婚是很自由的情。", {(16, 16, "M")}),
    Sentence("tax-R", "对我来说，今年的我的暑假非常特别。", {(8, 8, "R")}),
    Sentence("tax-S", "我的多爱的画家也画抽象的画儿。", {(3, 3, "S")}),
    Sentence("tax-W", "我觉得应该说出真相尽可能多，但有时候人被迫说谎。", {(8, 13, "W")}),
]
"""One annotated learner sentence per error type"""


@dataclass
class SyntheticData:
    """
    The output of ``Generator.generate``.

    Attributes
    ----------
    corpus : Corpus
        The sentences with their gold spans.
    parses : dict
        sentence id -> DependencyParse of the surface words.
    lexicon : Lexicon
        All multi-character vocabulary words (confusables included).
    """

    corpus: Corpus
    parses: dict
    lexicon: Lexicon


def vocabulary():
    """
    Returns every word the generator can emit (sorted).
    """
    words = set(TIMES + SUBJECTS + ADVERBS + VERBS + OBJECTS + PARTICLES)
    words.update(CONFUSABLES.values())
    return sorted(words)


def synthetic_lexicon():
    """
    Returns the lexicon of all multi-character vocabulary words.
    """
    return Lexicon.from_words(w for w in vocabulary() if len(w) > 1)


class Generator:
    """
    Draws rule-injected sentences.

    Parameters
    ----------
    seed : int
        The seed of the generator. By default ``defaults.seed``.
    error_rate : float
        The probability that a sentence receives an error.
    types : tuple
        The error types to inject (drawn uniformly).
    """

    __slots__ = ["_seed", "_rng", "error_rate", "types"]

    def __init__(self, seed: int = None, error_rate: float = 0.7, types: tuple = defaults.error_types):
        self._seed = defaults.seed if seed is None else seed
        self._rng = make_rng(self._seed)
        self.error_rate = error_rate
        self.types = tuple(types)

    def generate(self, n: int, prefix: str = "syn", id: str = None):
        """
        Generates `n` sentences.

        Parameters
        ----------
        n : int
            The number of sentences.
        prefix : str
            The sentence id prefix (ids are ``<prefix>-00001`` and so on).
        id : str
            The corpus id. By default ``<prefix>``.

        Returns
        -------
        SyntheticData
        """
        corpus = Corpus(id=id or prefix)
        parses = {}
        for idx in range(1, n + 1):
            words = self._skeleton()
            span = None
            if self._rng.random() < self.error_rate:
                type = self.types[self._rng.integers(len(self.types))]
                words, span = self._inject(words, type)
            sid = f"{prefix}-{idx:05d}"
            chars = "".join(w for w, _ in words)
            corpus.add(Sentence(sid, chars, {span} if span else set()))
            parses[sid] = self._parse(words)

        logger.info(f"Generated {n} synthetic sentences (seed {self._seed}).")
        return SyntheticData(corpus=corpus, parses=parses, lexicon=synthetic_lexicon())

    def _pick(self, options):
        return options[self._rng.integers(len(options))]

    def _skeleton(self):
        words = []
        if self._rng.random() < 0.5:
            words.append((self._pick(TIMES), "time"))
        words.append((self._pick(SUBJECTS), "subject"))
        if self._rng.random() < 0.5:
            words.append((self._pick(ADVERBS), "adverb"))
        words.append((self._pick(VERBS), "verb"))
        words.append((self._pick(OBJECTS), "object"))
        words.append((PUNCT, "punct"))
        return words

    def _inject(self, words, type):
        """
        Applies one error rule and returns the new word list and the gold span.
        """
        if type == "S":
            candidates = [i for i, (w, _) in enumerate(words) if w in CONFUSABLES]
            if not candidates:
                type = "R"
            else:
                i = self._pick(candidates)
                word, role = words[i]
                words = words[:i] + [(CONFUSABLES[word], role)] + words[i + 1 :]
                start = _offset(words, i)
                return words, ErrorSpan(start, start + len(CONFUSABLES[word]) - 1, "S")

        # the final punctuation stays in place for every rule
        last = len(words) - 1
        if type == "R":
            i = int(self._rng.integers(1, last + 1))
            particle = self._pick(PARTICLES)
            words = words[:i] + [(particle, "particle")] + words[i:]
            start = _offset(words, i)
            return words, ErrorSpan(start, start + len(particle) - 1, "R")

        if type == "M":
            i = int(self._rng.integers(last))
            words = words[:i] + words[i + 1 :]
            start = _offset(words, i)
            return words, ErrorSpan(start, start, "M")

        i = int(self._rng.integers(last - 1))
        words = words[:i] + [words[i + 1], words[i]] + words[i + 2 :]
        start = _offset(words, i)
        end = start + len(words[i][0]) + len(words[i + 1][0]) - 1
        return words, ErrorSpan(start, end, "W")

    @staticmethod
    def _parse(words):
        roles = [role for _, role in words]
        root = roles.index("verb") if "verb" in roles else len(words) // 2
        heads, relations = [], []
        for i, (_, role) in enumerate(words):
            if i == root:
                heads.append(0)
            elif i < root:
                heads.append(i + 2)
            else:
                heads.append(i)
            relations.append(_RELATIONS[role])
        return DependencyParse([w for w, _ in words], heads, relations)


def _offset(words, i):
    """The 1-based offset of the first character of word `i`"""
    return sum(len(w) for w, _ in words[:i]) + 1


def generate(n: int, seed: int = None, error_rate: float = 0.7, prefix: str = "syn"):
    """
    Generates a rule-injected corpus with its parses and lexicon.

    Parameters
    ----------
    n : int
        The number of sentences.
    seed : int
        The seed. By default ``defaults.seed``.
    error_rate : float
        The probability that a sentence receives an error.
    prefix : str
        The sentence id prefix.

    Returns
    -------
    SyntheticData
    """
    return Generator(seed=seed, error_rate=error_rate).generate(n, prefix=prefix)
