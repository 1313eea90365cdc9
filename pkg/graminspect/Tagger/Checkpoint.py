"""
Saving and loading trained taggers.

File format
-----------

.. code-block::

    GRAMINSPECT-CKPT-1
    manifest-bytes <n>
    <canonical JSON manifest>
    <payload>

The manifest records the format version, the config fingerprint, the seed, the selected
epoch, the model config, the vocabulary and, for every tensor (sorted by name), its shape,
dtype, byte offset into the payload, byte count and sha256 checksum. The payload holds all
tensors as row-major little-endian float64 values. Equal models always produce equal bytes.
"""

import json
from dataclasses import dataclass

import numpy as np

import graminspect._auxiliary as aux
import graminspect._auxiliary.warnings as aw
import graminspect.defaults as defaults
from graminspect.Layers import Vocab
from graminspect.numerics import ParamStore
from graminspect.Tagger.Tagger import ModelConfig, Tagger, fingerprint

logger = aux.default_logger()

FORMAT_VERSION = 1


@dataclass
class Checkpoint:
    """
    A trained tagger together with the facts needed to reproduce it.

    Attributes
    ----------
    config : ModelConfig
    vocab : Vocab
    store : ParamStore
    seed : int
        The training seed.
    epoch : int
        The epoch whose parameters were kept.
    """

    config: ModelConfig
    vocab: Vocab
    store: ParamStore
    seed: int = defaults.seed
    epoch: int = 0

    @classmethod
    def from_tagger(cls, tagger: Tagger, seed: int, epoch: int):
        return cls(config=tagger.config, vocab=tagger.vocab, store=tagger.store, seed=int(seed), epoch=int(epoch))

    def fingerprint(self):
        return fingerprint(self.config, self.vocab)

    def tagger(self):
        """
        Returns a ``Tagger`` over (a copy of) the checkpoint parameters.
        """
        return Tagger(self.config, self.vocab, self.store.copy())

    def check(self, config: ModelConfig):
        """
        Raises a ``TaggerError`` if `config` would build a different model.
        """
        got = fingerprint(config, self.vocab)
        if got != self.fingerprint():
            e = aw.TaggerError("fingerprint_mismatch", expected=self.config.to_dict(), got=config.to_dict())
            logger.error(e)
            raise e

    def to_bytes(self):
        """
        Serialises the checkpoint.
        """
        tensors, chunks, offset = [], [], 0
        for name in sorted(self.store.names()):
            data = np.ascontiguousarray(self.store[name], dtype=defaults.payload_dtype).tobytes()
            tensors.append(
                {
                    "name": name,
                    "shape": list(self.store[name].shape),
                    "dtype": defaults.payload_dtype,
                    "offset": offset,
                    "nbytes": len(data),
                    "sha256": aux.checksum(data),
                }
            )
            chunks.append(data)
            offset += len(data)

        manifest = {
            "version": FORMAT_VERSION,
            "fingerprint": self.fingerprint(),
            "seed": self.seed,
            "epoch": self.epoch,
            "config": self.config.to_dict(),
            "vocab": self.vocab.to_list(),
            "payload_bytes": offset,
            "tensors": tensors,
        }
        manifest = aux.canonical_json(manifest).encode(defaults.encoding)
        header = f"{defaults.checkpoint_magic}\nmanifest-bytes {len(manifest)}\n".encode(defaults.encoding)
        return header + manifest + b"\n" + b"".join(chunks)


def save_checkpoint(checkpoint: Checkpoint, filename: str):
    """
    Writes a checkpoint file.

    Parameters
    ----------
    checkpoint : Checkpoint
    filename : str
    """
    data = checkpoint.to_bytes()
    with open(filename, "wb") as f:
        f.write(data)
    logger.info(f"Saved checkpoint {filename} ({len(data)} bytes, fingerprint {checkpoint.fingerprint()[:12]}).")
    return filename


def load_checkpoint(filename: str, fingerprint: str = None):
    """
    Reads and verifies a checkpoint file.

    Parameters
    ----------
    filename : str
    fingerprint : str
        If given, the checkpoint must carry exactly this config fingerprint.

    Returns
    -------
    Checkpoint

    Raises
    ------
    CheckpointError
        On a wrong magic line or version, a truncated file, a checksum mismatch
        or a fingerprint mismatch.
    """
    with open(filename, "rb") as f:
        raw = f.read()
    return _parse(raw, filename, fingerprint)


def _fail(key, **attrs):
    e = aw.CheckpointError(key, **attrs)
    logger.critical(e)
    raise e


def _parse(raw: bytes, filename: str, expected: str = None):
    first, _, rest = raw.partition(b"\n")
    found = first.decode(defaults.encoding, errors="replace")
    if found != defaults.checkpoint_magic:
        _fail("bad_magic", file=filename, found=found[:40], expected=defaults.checkpoint_magic)

    header, _, rest = rest.partition(b"\n")
    try:
        key, size = header.decode(defaults.encoding).split(" ")
        size = int(size)
        if key != "manifest-bytes" or len(rest) < size + 1:
            raise ValueError("manifest shorter than announced")
        manifest = json.loads(rest[:size].decode(defaults.encoding))
    except (ValueError, UnicodeDecodeError) as err:
        _fail("truncated", file=filename, reason=f"unreadable manifest ({err})")

    if manifest.get("version") != FORMAT_VERSION:
        _fail("bad_magic", file=filename, found=f"version {manifest.get('version')}", expected=f"version {FORMAT_VERSION}")

    payload = rest[size + 1 :]
    if len(payload) != manifest["payload_bytes"]:
        _fail("truncated", file=filename, reason=f"payload has {len(payload)} of {manifest['payload_bytes']} bytes")

    config = ModelConfig.from_dict(manifest["config"])
    vocab = Vocab(manifest["vocab"])
    if fingerprint(config, vocab) != manifest["fingerprint"]:
        _fail("fingerprint", file=filename, found=manifest["fingerprint"][:12], expected=fingerprint(config, vocab)[:12])
    if expected is not None and manifest["fingerprint"] != expected:
        _fail("fingerprint", file=filename, found=manifest["fingerprint"][:12], expected=expected[:12])

    store = ParamStore()
    for entry in manifest["tensors"]:
        data = payload[entry["offset"] : entry["offset"] + entry["nbytes"]]
        if aux.checksum(data) != entry["sha256"]:
            _fail("checksum", name=entry["name"], file=filename)
        store.add(entry["name"], np.frombuffer(data, dtype=entry["dtype"]).reshape(entry["shape"]))

    return Checkpoint(config=config, vocab=vocab, store=store, seed=manifest["seed"], epoch=manifest["epoch"])
