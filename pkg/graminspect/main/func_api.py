"""
These are the stand-alone functions for reading and writing ``graminspect`` data.
They make use of default instances of the ``graminspect.Readers`` classes and offer a quicker workflow.
"""

import graminspect.Readers as Readers
from graminspect.main.Corpus import bio_to_spans, spans_to_bio, encodable_spans

__default_CorpusReader__ = Readers.CorpusReader()
__default_PredictionReader__ = Readers.PredictionReader()
__default_DependencyReader__ = Readers.DependencyReader()
__default_LexiconReader__ = Readers.LexiconReader()
__default_ManifestReader__ = Readers.ModelManifestReader()


def read_corpus(filename: str):
    """
    Reads a gold corpus file.

    Parameters
    ----------
    filename : str
        A line-delimited JSON file of ``{"id", "text", "errors"}`` records.

    Returns
    -------
    Corpus
    """
    return __default_CorpusReader__.pipe(filename)


def read_predictions(filename: str, model_id: str = None, is_lgn: bool = False):
    """
    Reads a prediction file.

    Parameters
    ----------
    filename : str
        A TSV file of ``sid start end type`` or ``sid correct`` lines.
    model_id : str
        The model identifier. By default the file's basename.
    is_lgn : bool
        Marks the predictions as stemming from a lexicon-graph model.

    Returns
    -------
    PredictionSet
    """
    return __default_PredictionReader__.read(filename, model_id=model_id, is_lgn=is_lgn)


def write_predictions(predictions, filename: str):
    """
    Writes a ``PredictionSet`` in canonical form.
    """
    Readers.write_predictions(predictions, filename)


def read_parses(filename: str, corpus):
    """
    Reads dependency parses and matches them to the sentences of `corpus` (by order).

    Returns
    -------
    dict
        sentence id -> DependencyParse
    """
    return __default_DependencyReader__.pipe(filename, corpus)


def read_lexicon(filename: str):
    """
    Reads a lexicon (one word per line).

    Returns
    -------
    Lexicon
    """
    return __default_LexiconReader__.pipe(filename)


def read_models(filename: str):
    """
    Reads a model-list manifest and every prediction file it lists.

    Returns
    -------
    list
        A list of ``PredictionSet`` objects.
    """
    return __default_ManifestReader__.pipe(filename)
