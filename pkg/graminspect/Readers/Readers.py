"""
.. _graminspect.Readers:

This module provides the ``Reader`` classes for the text files ``graminspect`` consumes,
together with the matching writers.

CorpusReader
------------
Reads a gold corpus. Each line holds one JSON record with the fields `id`, `text` and
`errors`, where every error carries 1-based inclusive `start` and `end` offsets (in
characters) and a `type` out of R, M, S, W.

.. code-block::

    {"id": "s1", "text": "对我来说", "errors": [{"start": 2, "end": 2, "type": "R"}]}

PredictionReader
----------------
Reads a prediction file. Each line is tab separated and either lists one error
or marks a sentence as correct:

+------+-------+-----+------+
| sid  | start | end | type |
+======+=======+=====+======+
| s1   | 3     | 4   | M    |
+------+-------+-----+------+
| s2   | correct            |
+------+--------------------+

``write_predictions`` writes the canonical form (sorted by sid, start, end and type),
so reading and writing are exact inverses on canonical files.

LexiconReader
-------------
Reads a lexicon, one word per line.

DependencyReader
----------------
Reads dependency parses, one token per line (``index<TAB>word<TAB>head<TAB>relation``)
with a blank line between sentences. Parses are matched to the sentences of a corpus by order.

ModelManifestReader
-------------------
Reads a model list (``prediction_file<TAB>is_lgn``) and loads every listed prediction file.
"""

import json
import os

import graminspect._auxiliary as aux
import graminspect._auxiliary.warnings as aw
import graminspect.defaults as defaults
from graminspect.main.Corpus import Corpus, ErrorSpan, ErrorType, PredictionSet, Sentence

logger = aux.default_logger()


class _CORE_Reader(aux._ID):
    """
    The class handling the core functions of the Reader classes.
    """

    __slots__ = ["_src", "_data"]

    def __init__(self):
        super().__init__()
        self._src = None
        self._data = None

    def get(self):
        """
        Returns
        -------
        data
            The data read by the last call of ``read``.
        """
        return self._data

    def n(self):
        """
        Returns
        -------
        int
            The number of records read.
        """
        return 0 if self._data is None else len(self._data)

    def _lines(self, filename):
        """
        Yields (line number, stripped line) for every line of a text file.
        """
        self._src = filename
        with open(filename, "r", encoding=defaults.encoding) as f:
            for idx, line in enumerate(f, start=1):
                yield idx, line.rstrip("\r\n")

    def _fail(self, key, **attrs):
        e = aw.ReaderError(key, file=self._src, **attrs)
        logger.critical(e)
        raise e


class CorpusReader(_CORE_Reader):
    """
    Reads gold corpora (one JSON record per line).
    """

    def __init__(self, filename: str = None):
        super().__init__()
        if filename is not None:
            self.read(filename)

    def read(self, filename: str):
        """
        Reads the file into a list of ``Sentence`` objects.

        Parameters
        ----------
        filename : str
            The gold corpus file.

        Returns
        -------
        list
            The sentences in file order. An empty file yields an empty list.
        """
        sentences = []
        for line_no, line in self._lines(filename):
            if not line.strip():
                continue
            sentences.append(self._parse(line_no, line))
        self._data = sentences
        logger.debug(f"read {len(sentences)} sentences from {filename}")
        return sentences

    def pipe(self, filename: str):
        """
        A wrapper for ``read`` that returns a ``Corpus`` named after the file.
        """
        sentences = self.read(filename)
        try:
            return Corpus(sentences, id=aux.fileID(filename))
        except aw.CorpusError as err:
            self._fail("malformed_record", line="?", reason=str(err))

    def _parse(self, line_no, line):
        try:
            record = json.loads(line)
            sid, text, errors = record["id"], record["text"], record.get("errors", [])
        except (json.JSONDecodeError, AttributeError, TypeError, KeyError) as err:
            self._fail("malformed_record", line=line_no, reason=repr(err))

        try:
            spans = [ErrorSpan(err["start"], err["end"], err["type"]) for err in errors]
            return Sentence(sid, text, spans)
        except (KeyError, TypeError) as err:
            self._fail("malformed_record", line=line_no, reason=f"sentence '{sid}': missing or invalid field {err}")
        except aw.CorpusError as err:
            self._fail("bad_span", line=line_no, reason=f"sentence '{sid}': {err}")


class PredictionReader(_CORE_Reader):
    """
    Reads prediction files (tab separated, one error or one ``correct`` marker per line).
    """

    def __init__(self, filename: str = None, **kwargs):
        super().__init__()
        if filename is not None:
            self.read(filename, **kwargs)

    def read(self, filename: str, model_id: str = None, is_lgn: bool = False):
        """
        Reads a prediction file.

        Parameters
        ----------
        filename : str
            The prediction file.
        model_id : str
            An identifier for the predicting model. By default the file basename.
        is_lgn : bool
            Marks the predictions as lexicon-graph model output.

        Returns
        -------
        PredictionSet
        """
        spans = {}
        for line_no, line in self._lines(filename):
            if not line.strip():
                continue
            cols = line.split("\t")
            if len(cols) == 2 and cols[1] == defaults.correct_token:
                spans.setdefault(cols[0], set())
                continue
            if len(cols) != 4:
                self._fail("bad_columns", line=line_no, n=len(cols), expected="4 (or 2 with 'correct')")
            sid, start, end, token = cols
            start, end = self._offset(line_no, start), self._offset(line_no, end)
            if token not in ErrorType.__members__:
                self._fail("unknown_type", line=line_no, token=token)
            try:
                spans.setdefault(sid, set()).add(ErrorSpan(start, end, token))
            except aw.CorpusError as err:
                self._fail("bad_span", line=line_no, reason=str(err))

        model_id = aux.fileID(filename) if model_id is None else model_id
        self._data = PredictionSet(model_id, spans, is_lgn=is_lgn)
        return self._data

    def pipe(self, filename: str, **kwargs):
        """
        A wrapper for ``read``.
        """
        return self.read(filename, **kwargs)

    def _offset(self, line_no, token):
        try:
            return int(token)
        except ValueError:
            self._fail("non_numeric", line=line_no, token=token)


def write_predictions(predictions: PredictionSet, filename: str):
    """
    Writes a ``PredictionSet`` as a canonical prediction file
    (lines sorted by sid, start, end and type; ``sid<TAB>correct`` for error-free sentences).
    """
    lines = predictions.canonical_lines()
    with open(filename, "w", encoding=defaults.encoding, newline="\n") as f:
        f.writelines(f"{line}\n" for line in lines)
    logger.debug(f"wrote {len(lines)} prediction lines to {filename}")


class LexiconReader(_CORE_Reader):
    """
    Reads a lexicon (one word per line). Blank lines are ignored.
    """

    def read(self, filename: str):
        """
        Returns
        -------
        Lexicon
        """
        from graminspect.Graphs import Lexicon

        words = [line.strip() for _, line in self._lines(filename) if line.strip()]
        self._data = Lexicon.from_words(words)
        return self._data

    def pipe(self, filename: str):
        return self.read(filename)


class DependencyReader(_CORE_Reader):
    """
    Reads dependency parses in the four-column token format.
    """

    def read(self, filename: str):
        """
        Reads all parses in file order.

        Returns
        -------
        list
            A list of ``DependencyParse`` objects.
        """
        from graminspect.Graphs import DependencyParse

        parses, block = [], []
        for line_no, line in self._lines(filename):
            if not line.strip():
                if block:
                    parses.append(self._make_parse(DependencyParse, block))
                    block = []
                continue
            block.append((line_no, line))
        if block:
            parses.append(self._make_parse(DependencyParse, block))
        self._data = parses
        return parses

    def pipe(self, filename: str, corpus: Corpus):
        """
        Reads the parses and assigns them to the sentences of a corpus by order.

        Returns
        -------
        dict
            sentence id -> ``DependencyParse``
        """
        parses = self.read(filename)
        if len(parses) != len(corpus):
            self._fail("count_mismatch", found=len(parses), expected=len(corpus))
        assigned = {}
        for idx, (sentence, parse) in enumerate(zip(corpus, parses), start=1):
            if parse.text != sentence.text:
                self._fail("text_mismatch", index=idx, sid=sentence.id)
            assigned[sentence.id] = parse
        return assigned

    def _make_parse(self, factory, block):
        words, heads, relations = [], [], []
        for expected, (line_no, line) in enumerate(block, start=1):
            cols = line.split("\t")
            if len(cols) != 4:
                self._fail("bad_columns", line=line_no, n=len(cols), expected=4)
            index, word, head, relation = cols
            try:
                index, head = int(index), int(head)
            except ValueError:
                self._fail("non_numeric", line=line_no, token=f"{index}/{head}")
            if index != expected:
                self._fail("malformed_record", line=line_no, reason=f"token index {index} should be {expected}")
            words.append(word)
            heads.append(head)
            relations.append(relation)
        try:
            return factory(words, heads, relations)
        except aw.GraphError as err:
            self._fail("malformed_record", line=block[0][0], reason=str(err))


def write_dependencies(parses, filename: str):
    """
    Writes dependency parses in the four-column token format.
    """
    with open(filename, "w", encoding=defaults.encoding, newline="\n") as f:
        for parse in parses:
            for idx, (word, head, relation) in enumerate(parse.words, start=1):
                f.write(f"{idx}\t{word}\t{head}\t{relation}\n")
            f.write("\n")


def write_lexicon(words, filename: str):
    """
    Writes a lexicon, one word per line, sorted.
    """
    with open(filename, "w", encoding=defaults.encoding, newline="\n") as f:
        f.writelines(f"{word}\n" for word in sorted(set(words)))


def write_corpus(corpus, filename: str):
    """
    Writes a gold corpus as line-delimited JSON records (spans sorted).
    """
    with open(filename, "w", encoding=defaults.encoding, newline="\n") as f:
        for sentence in corpus:
            errors = [{"start": s.start, "end": s.end, "type": s.type.name} for s in sorted(sentence.gold)]
            record = {"id": sentence.id, "text": sentence.text, "errors": errors}
            f.write(json.dumps(record, ensure_ascii=False) + "\n")


class ModelManifestReader(_CORE_Reader):
    """
    Reads a model list of ``prediction_file<TAB>is_lgn(0|1)`` lines.
    Relative paths are resolved against the manifest's directory.
    """

    def read(self, filename: str):
        """
        Returns
        -------
        list
            (path, is_lgn) tuples in file order.
        """
        root = os.path.dirname(os.path.abspath(filename))
        entries = []
        for line_no, line in self._lines(filename):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 2 or cols[1] not in ("0", "1"):
                self._fail("bad_columns", line=line_no, n=len(cols), expected="2 (path, 0|1)")
            path = cols[0] if os.path.isabs(cols[0]) else os.path.join(root, cols[0])
            entries.append((path, cols[1] == "1"))
        self._data = entries
        return entries

    def pipe(self, filename: str):
        """
        Reads the manifest and every listed prediction file.

        Returns
        -------
        list
            A list of ``PredictionSet`` objects.
        """
        reader = PredictionReader()
        return [reader.read(path, is_lgn=is_lgn) for path, is_lgn in self.read(filename)]


def write_manifest(entries, filename: str):
    """
    Writes a model list from (path, is_lgn) tuples.
    """
    with open(filename, "w", encoding=defaults.encoding, newline="\n") as f:
        f.writelines(f"{path}\t{int(bool(is_lgn))}\n" for path, is_lgn in entries)
