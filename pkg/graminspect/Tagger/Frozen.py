"""
Frozen contextual embeddings for variant B.

A ``FrozenEmbeddingTable`` maps sentence ids to precomputed N x width feature matrices.
The rows are inputs, not parameters: they never enter a ``ParamStore`` and never receive
gradient updates.

File format
-----------

.. code-block::

    GRAMINSPECT-FROZEN-1
    manifest-bytes <n>
    <canonical JSON manifest: width, and per sentence id, n, offset, nbytes>
    <row-major little-endian float64 payload>
"""

import json

import numpy as np

import graminspect._auxiliary as aux
import graminspect._auxiliary.warnings as aw
import graminspect.defaults as defaults
from graminspect.numerics import make_rng

logger = aux.default_logger()


class FrozenEmbeddingTable:
    """
    Per-sentence precomputed feature matrices of a fixed width.

    Parameters
    ----------
    width : int
        The feature width.
    rows : dict
        sentence id -> N x width array.
    """

    __slots__ = ["width", "_rows"]

    def __init__(self, width: int, rows: dict = None):
        self.width = int(width)
        self._rows = {}
        for sid, row in (rows or {}).items():
            self.add(sid, row)

    def add(self, sid, row):
        row = np.array(row, dtype=np.float64)
        if row.ndim != 2 or row.shape[1] != self.width:
            e = aw.LstmError("width_mismatch", width=row.shape[-1], expected=self.width)
            logger.error(e)
            raise e
        row.setflags(write=False)
        self._rows[str(sid)] = row

    def get(self, sid, n: int = None, strict: bool = True):
        """
        Returns the feature matrix of a sentence.

        Parameters
        ----------
        sid : str
            The sentence id.
        n : int
            The sentence length (only needed if `strict` is False).
        strict : bool
            If False, a missing row is reported through a ``SoftWarning``
            and replaced by zeros of shape (n, width).
        """
        if sid in self._rows:
            return self._rows[sid]
        if strict or n is None:
            e = aw.ReaderError("missing_row", sid=sid)
            logger.error(e)
            raise e
        aw.SoftWarning("Reader:missing_row", sid=sid)
        return np.zeros((n, self.width))

    def ids(self):
        return sorted(self._rows)

    @classmethod
    def simulate(cls, corpus, width: int, seed: int = None, context: float = 0.5):
        """
        Builds deterministic stand-in contextual features for a corpus.

        Every character gets a fixed random vector (drawn in sorted character order) and
        each position mixes in the mean of its neighbours' vectors, scaled by `context`.

        Parameters
        ----------
        corpus : Corpus
        width : int
        seed : int
            By default ``defaults.seed``.
        context : float
            The weight of the neighbour mean.
        """
        rng = make_rng(seed)
        chars = sorted({c for sentence in corpus for c in sentence.chars})
        table = dict(zip(chars, rng.normal(0.0, 1.0, size=(len(chars), width))))
        rows = {}
        for sentence in corpus:
            base = np.array([table[c] for c in sentence.chars])
            padded = np.pad(base, ((1, 1), (0, 0)))
            rows[sentence.id] = base + context * 0.5 * (padded[:-2] + padded[2:])
        return cls(width, rows)

    def save(self, filename: str):
        """
        Writes the table (sentence ids sorted).
        """
        entries, chunks, offset = [], [], 0
        for sid in self.ids():
            data = np.ascontiguousarray(self._rows[sid], dtype=defaults.payload_dtype).tobytes()
            entries.append({"id": sid, "n": int(self._rows[sid].shape[0]), "offset": offset, "nbytes": len(data)})
            chunks.append(data)
            offset += len(data)
        manifest = aux.canonical_json({"width": self.width, "dtype": defaults.payload_dtype, "rows": entries}).encode(defaults.encoding)
        with open(filename, "wb") as f:
            f.write(f"{defaults.frozen_magic}\nmanifest-bytes {len(manifest)}\n".encode(defaults.encoding))
            f.write(manifest)
            f.write(b"\n")
            f.writelines(chunks)

    @classmethod
    def load(cls, filename: str):
        """
        Reads a table written by ``save``.
        """
        with open(filename, "rb") as f:
            raw = f.read()

        def fail(key, **attrs):
            e = aw.ReaderError(key, file=filename, **attrs)
            logger.critical(e)
            raise e

        magic = defaults.frozen_magic.encode(defaults.encoding) + b"\n"
        if not raw.startswith(magic):
            fail("bad_magic", kind="frozen embedding", magic=defaults.frozen_magic)
        rest = raw[len(magic) :]
        header, _, rest = rest.partition(b"\n")
        try:
            size = int(header.decode(defaults.encoding).split(" ")[1])
            manifest = json.loads(rest[:size].decode(defaults.encoding))
        except (IndexError, ValueError, UnicodeDecodeError) as err:
            fail("truncated", reason=f"unreadable manifest ({err})")
        payload = rest[size + 1 :]

        width = int(manifest["width"])
        table = cls(width)
        for entry in manifest["rows"]:
            stop = entry["offset"] + entry["nbytes"]
            if stop > len(payload):
                fail("truncated", reason=f"row '{entry['id']}' ends at byte {stop} of a {len(payload)}-byte payload")
            data = np.frombuffer(payload[entry["offset"] : stop], dtype=defaults.payload_dtype)
            table.add(entry["id"], data.reshape(entry["n"], width))
        return table

    def __contains__(self, sid):
        return sid in self._rows

    def __len__(self):
        return len(self._rows)

    def __repr__(self):
        return f"FrozenEmbeddingTable(width {self.width}, {len(self)} sentences)"
