"""
Character-level graphs for the graph attention layers.

A ``CharGraph`` stores an undirected edge set over the characters of one sentence
(1-based node ids) together with a provenance tag per edge. Every node carries a
self-loop, so no attention neighbourhood is ever empty.

``dep_to_char_adjacency`` projects a word-level dependency parse onto the characters:

- a self-loop on every character,
- an `intra-word` edge between adjacent characters of the same word,
- a `dependency` edge between the first character of every dependent word and the first
  character of its head word (the root word only contributes its intra-word edges).

.. code-block:: python

    from graminspect.Graphs import DependencyParse, dep_to_char_adjacency

    parse = DependencyParse(["北京", "离开"], [2, 0], ["SBV", "HED"])
    graph = dep_to_char_adjacency(parse)
    graph.edge_table()
"""

import numpy as np
import pandas as pd

import graminspect._auxiliary as aux
import graminspect._auxiliary.warnings as aw

logger = aux.default_logger()

SELF = "self"
CHAIN = "chain"
INTRA_WORD = "intra-word"
DEPENDENCY = "dependency"
LEXICON_WORD = "lexicon-word"
PROVENANCES = (SELF, CHAIN, INTRA_WORD, DEPENDENCY, LEXICON_WORD)
_RANK = {p: rank for rank, p in enumerate(PROVENANCES)}


class CharGraph:
    """
    An undirected graph over the characters of a sentence.

    Parameters
    ----------
    n : int
        The number of characters (nodes). Nodes are numbered 1..n.
    edges : iterable
        (i, j, provenance) triples. Self-loops are added for every node first.
        If an edge is listed more than once the provenance that comes later in
        ``PROVENANCES`` wins, so a lexicon word on two adjacent characters is
        reported as `lexicon-word` rather than `chain`. Self-loops stay `self`.
    """

    __slots__ = ["_n", "_edges"]

    def __init__(self, n: int, edges=()):
        self._n = int(n)
        self._edges = {}
        for i in range(1, self._n + 1):
            self._add(i, i, SELF)
        for i, j, provenance in edges:
            self._add(i, j, provenance)

    def _add(self, i, j, provenance):
        i, j = int(i), int(j)
        if not (1 <= i <= self._n and 1 <= j <= self._n):
            e = aw.GraphError("bad_edge", i=i, j=j, n=self._n)
            logger.error(e)
            raise e
        key = (min(i, j), max(i, j))
        known = self._edges.get(key)
        if known is None or (i != j and _RANK.get(provenance, -1) > _RANK.get(known, -1)):
            self._edges[key] = provenance

    @property
    def n(self):
        """The number of nodes"""
        return self._n

    def has_edge(self, i, j):
        return (min(i, j), max(i, j)) in self._edges

    def provenance(self, i, j):
        """
        Returns the provenance tag of an edge (None if there is no such edge).
        """
        return self._edges.get((min(i, j), max(i, j)))

    def edges(self, provenance: str = None):
        """
        Returns the sorted (i, j, provenance) triples with i <= j.

        Parameters
        ----------
        provenance : str
            If given, only edges with this tag are returned.
        """
        return [(i, j, p) for (i, j), p in sorted(self._edges.items()) if provenance is None or p == provenance]

    def neighbours(self, i):
        """
        Returns the sorted neighbourhood of node `i` (including `i` itself).
        """
        return sorted({b if a == i else a for a, b in self._edges if i in (a, b)})

    def adjacency(self):
        """
        Returns
        -------
        np.ndarray
            The symmetric boolean n x n adjacency matrix (0-based indices) with a full diagonal.
        """
        adj = np.zeros((self._n, self._n), dtype=bool)
        for i, j in self._edges:
            adj[i - 1, j - 1] = adj[j - 1, i - 1] = True
        return adj

    def edge_table(self):
        """
        Returns
        -------
        pd.DataFrame
            The edges with the columns `i`, `j`, `provenance`.
        """
        return pd.DataFrame(self.edges(), columns=["i", "j", "provenance"])

    def __len__(self):
        return len(self._edges)

    def __eq__(self, other):
        if not isinstance(other, CharGraph):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges

    def __repr__(self):
        return f"CharGraph({self._n} nodes, {len(self._edges)} edges)"


class DependencyParse:
    """
    A word-level dependency parse.

    Parameters
    ----------
    words : list
        The word surfaces in sentence order.
    heads : list
        The 1-based head word index of every word (0 marks the root).
    relations : list
        The relation labels (optional).
    """

    __slots__ = ["_words", "_offsets"]

    def __init__(self, words: list, heads: list, relations: list = None):
        words = [str(w) for w in words]
        heads = [int(h) for h in heads]
        relations = ["_"] * len(words) if relations is None else [str(r) for r in relations]
        if not words:
            e = aw.GraphError("empty_parse")
            logger.error(e)
            raise e
        if len(heads) != len(words) or len(relations) != len(words) or any(w == "" for w in words):
            e = aw.GraphError("offset_mismatch", words="/".join(words), text="".join(words))
            logger.error(e)
            raise e

        n = len(words)
        for idx, head in enumerate(heads, start=1):
            if not 0 <= head <= n:
                e = aw.GraphError("bad_head", index=idx, head=head, n=n)
                logger.error(e)
                raise e
        roots = heads.count(0)
        if roots != 1:
            e = aw.GraphError("bad_root", n=roots)
            logger.error(e)
            raise e

        self._words = tuple(zip(words, heads, relations))
        offsets, start = [], 1
        for word in words:
            offsets.append((start, start + len(word) - 1))
            start += len(word)
        self._offsets = tuple(offsets)

    @property
    def words(self):
        """(surface, head, relation) triples"""
        return self._words

    @property
    def offsets(self):
        """The 1-based inclusive (first, last) character of every word"""
        return self._offsets

    @property
    def text(self):
        return "".join(w for w, _, _ in self._words)

    @property
    def n_chars(self):
        return self._offsets[-1][1]

    def check(self, sentence):
        """
        Raises a ``GraphError`` if the word surfaces do not reconstruct the sentence.

        Parameters
        ----------
        sentence : Sentence or str
        """
        text = sentence if isinstance(sentence, str) else "".join(getattr(sentence, "chars", sentence))
        if text != self.text:
            e = aw.GraphError("offset_mismatch", words="/".join(w for w, _, _ in self._words), text=text)
            logger.error(e)
            raise e

    def __len__(self):
        return len(self._words)

    def __repr__(self):
        return "DependencyParse(" + " ".join(f"{w}<-{h}" for w, h, _ in self._words) + ")"


def dep_to_char_adjacency(parse: DependencyParse, sentence=None):
    """
    Projects a dependency parse onto a character graph.

    Parameters
    ----------
    parse : DependencyParse
        The parse.
    sentence : Sentence or str
        If given, the parse is checked to reconstruct it.

    Returns
    -------
    CharGraph
    """
    if sentence is not None:
        parse.check(sentence)
    edges = []
    for first, last in parse.offsets:
        edges.extend((p, p + 1, INTRA_WORD) for p in range(first, last))
    for (_, head, _), (first, _) in zip(parse.words, parse.offsets):
        if head > 0:
            edges.append((first, parse.offsets[head - 1][0], DEPENDENCY))
    return CharGraph(parse.n_chars, edges)
