"""
Character graphs built from dependency parses and lexicon matches.
"""

from .Graphs import CharGraph, DependencyParse, dep_to_char_adjacency, PROVENANCES
from .Lexicon import Lexicon, LexiconGraph, lexicon_match, build_lexicon_graph


def build_graphs(corpus, variant: str, parses: dict = None, lexicon: Lexicon = None):
    """
    Builds the graph every sentence of a corpus needs for a model variant.

    Parameters
    ----------
    corpus : Corpus
    variant : str
        "A" uses dependency graphs (requires `parses`), "C" uses lexicon graphs
        (requires `lexicon`). Variant "B" needs no graphs.
    parses : dict
        sentence id -> DependencyParse.
    lexicon : Lexicon

    Returns
    -------
    dict
        sentence id -> CharGraph (empty for variant B).
    """
    if variant == "A" and parses is not None:
        return {s.id: dep_to_char_adjacency(parses[s.id], s) for s in corpus if s.id in parses}
    if variant == "C" and lexicon is not None:
        return {s.id: build_lexicon_graph(s, lexicon) for s in corpus}
    return {}
