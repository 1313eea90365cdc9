"""
The ``Lexicon`` trie, lexicon matching and the lexicon graph.

``lexicon_match`` scans the sentence with the trie from every start position and
reports every dictionary word it contains (maximal and non-maximal matches alike),
as 1-based inclusive ``(start, end, word)`` triples sorted by (start, end).

``build_lexicon_graph`` connects consecutive characters by `chain` edges and adds one
`lexicon-word` edge between the first and last character of every match.
"""

import graminspect._auxiliary as aux
import graminspect._auxiliary.warnings as aw
from graminspect.Graphs.Graphs import CHAIN, LEXICON_WORD, CharGraph

logger = aux.default_logger()


class _TrieNode:
    __slots__ = ["children", "is_word"]

    def __init__(self):
        self.children = {}
        self.is_word = False


class Lexicon:
    """
    A set of words stored as a prefix trie over characters.

    Parameters
    ----------
    words : iterable
        The initial words.
    """

    __slots__ = ["_root", "_size"]

    def __init__(self, words=()):
        self._root = _TrieNode()
        self._size = 0
        for word in words:
            self.add(word)

    @classmethod
    def from_words(cls, words):
        return cls(words)

    @classmethod
    def read(cls, filename: str):
        """
        Reads a lexicon file (one word per line).
        """
        import graminspect.Readers as Readers

        return Readers.LexiconReader().read(filename)

    def add(self, word: str):
        """
        Inserts a word. Empty words are rejected.
        """
        if not word:
            e = aw.GraphError("empty_word")
            logger.error(e)
            raise e
        node = self._root
        for char in word:
            node = node.children.setdefault(char, _TrieNode())
        if not node.is_word:
            node.is_word = True
            self._size += 1

    def words(self):
        """
        Returns all words, sorted.
        """
        found = []

        def walk(node, prefix):
            if node.is_word:
                found.append(prefix)
            for char, child in node.children.items():
                walk(child, prefix + char)

        walk(self._root, "")
        return sorted(found)

    def match(self, chars):
        """
        Returns every (start, end, word) occurrence of a lexicon word in `chars` (1-based, inclusive).
        """
        chars = tuple(chars)
        matches = []
        for i in range(len(chars)):
            node = self._root
            for j in range(i, len(chars)):
                node = node.children.get(chars[j])
                if node is None:
                    break
                if node.is_word:
                    matches.append((i + 1, j + 1, "".join(chars[i : j + 1])))
        return matches

    def __contains__(self, word):
        node = self._root
        for char in word:
            node = node.children.get(char)
            if node is None:
                return False
        return node.is_word and bool(word)

    def __len__(self):
        return self._size

    def __repr__(self):
        return f"Lexicon({self._size} words)"


def _chars(sentence):
    if isinstance(sentence, str):
        return tuple(sentence)
    return tuple(getattr(sentence, "chars", sentence))


def lexicon_match(sentence, lexicon: Lexicon):
    """
    Finds every lexicon word occurring in a sentence.

    Parameters
    ----------
    sentence : Sentence or str
    lexicon : Lexicon

    Returns
    -------
    list
        (start, end, word) triples, 1-based inclusive, sorted by (start, end).
    """
    return lexicon.match(_chars(sentence))


class LexiconGraph:
    """
    The character nodes of a sentence together with its lexicon word edges.

    Parameters
    ----------
    sentence : Sentence or str
    lexicon : Lexicon
    """

    __slots__ = ["_chars", "_matches"]

    def __init__(self, sentence, lexicon: Lexicon):
        self._chars = _chars(sentence)
        self._matches = tuple(lexicon_match(self._chars, lexicon))

    @property
    def chars(self):
        return self._chars

    @property
    def word_edges(self):
        """(start, end, word) triples sorted by (start, end)"""
        return self._matches

    def to_char_graph(self):
        """
        Returns
        -------
        CharGraph
            Self-loops, chain edges between consecutive characters
            and one start-end edge per matched word.
        """
        n = len(self._chars)
        edges = [(p, p + 1, CHAIN) for p in range(1, n)]
        edges.extend((start, end, LEXICON_WORD) for start, end, _ in self._matches)
        return CharGraph(n, edges)

    def __repr__(self):
        return f"LexiconGraph({len(self._chars)} characters, {len(self._matches)} word edges)"


def build_lexicon_graph(sentence, lexicon: Lexicon):
    """
    Builds the lexicon graph of a sentence as a ``CharGraph``.
    """
    return LexiconGraph(sentence, lexicon).to_char_graph()
