"""
The training loop: shuffled mini-batches, mean CRF negative log-likelihood, inverted
dropout, Adam updates and (optionally) validation-driven model selection.

All randomness flows from one seed, split into three streams (initialisation,
shuffling, dropout), so a fixed (seed, config, data) reproduces every loss and every
parameter bit for bit.
"""

import numpy as np
import pandas as pd
from tqdm import tqdm

import graminspect._auxiliary as aux
import graminspect._auxiliary.warnings as aw
import graminspect.defaults as defaults
from graminspect.Layers import Vocab
from graminspect.main.Corpus import PredictionSet
from graminspect.numerics import Adam, check_finite, spawn_rngs
from graminspect.Tagger.Checkpoint import Checkpoint
from graminspect.Tagger.Tagger import ModelConfig, Tagger, TrainConfig

logger = aux.default_logger()


def _inputs(sentence, graphs, frozen, strict=True):
    graph = None if graphs is None else graphs.get(sentence.id)
    row = None if frozen is None else frozen.get(sentence.id, sentence.n, strict=strict)
    return graph, row


def predict_corpus(tagger: Tagger, corpus, graphs: dict = None, frozen=None, model_id: str = None, is_lgn: bool = None, strict: bool = True):
    """
    Decodes every sentence of a corpus.

    Parameters
    ----------
    tagger : Tagger
    corpus : Corpus
    graphs : dict
        sentence id -> CharGraph (variants A and C).
    frozen : FrozenEmbeddingTable
        The frozen embeddings (variant B).
    model_id : str
        The id of the resulting prediction set.
    is_lgn : bool
        By default True for variant C (the lexicon-graph model).
    strict : bool
        If False, missing frozen rows are replaced by zeros with a warning.

    Returns
    -------
    PredictionSet
        Lists every sentence (an empty span set marks a sentence predicted correct).
    """
    is_lgn = tagger.variant == "C" if is_lgn is None else is_lgn
    spans = {}
    for sentence in corpus:
        graph, row = _inputs(sentence, graphs, frozen, strict)
        spans[sentence.id] = tagger.predict(sentence, graph, row)
    return PredictionSet(model_id or f"{tagger.variant}-model", spans, is_lgn=is_lgn)


class Trainer(aux._ID):
    """
    Trains a ``Tagger``.

    Parameters
    ----------
    config : TrainConfig
        The training schedule. By default the "paper" profile.

    Usage
    -----

    .. code-block:: python

        trainer = Trainer(TrainConfig.from_profile("toy", seed=7))
        trainer.link(corpus, graphs=graphs)
        trainer.link_validation(dev, graphs=dev_graphs)
        checkpoint = trainer.pipe(ModelConfig.from_profile("toy", "A"))
        trainer.history()
    """

    __slots__ = ["_config", "_train", "_validation", "_checkpoint", "_history"]

    def __init__(self, config: TrainConfig = None):
        super().__init__()
        self._config = TrainConfig.from_profile() if config is None else config
        self._train = None
        self._validation = None
        self._checkpoint = None
        self._history = None

    @property
    def config(self):
        return self._config

    def link(self, corpus, graphs: dict = None, frozen=None):
        """
        Links the training data.

        Parameters
        ----------
        corpus : Corpus
        graphs : dict
            sentence id -> CharGraph (variants A and C).
        frozen : FrozenEmbeddingTable
            Frozen embeddings (variant B).
        """
        if corpus is None or len(corpus) == 0:
            e = aw.TaggerError("empty_corpus")
            logger.critical(e)
            raise e
        self._train = (corpus, graphs, frozen)
        self.id(corpus.id())

    def link_validation(self, corpus, graphs: dict = None, frozen=None):
        """
        Links a validation split. The kept parameters are then those of the epoch with
        the best F1 at the objective level (the earliest one on ties).
        """
        self._validation = (corpus, graphs, frozen)

    def get(self):
        """
        Returns
        -------
        Checkpoint
            The trained model (None before ``pipe``).
        """
        return self._checkpoint

    def history(self):
        """
        Returns
        -------
        pd.DataFrame
            One row per epoch: `epoch`, `loss` and (with validation) the F1 of every level.
        """
        return self._history

    def pipe(self, model: ModelConfig):
        """
        Trains a model of the given architecture.

        Returns
        -------
        Checkpoint
        """
        if self._train is None:
            e = aw.TaggerError("empty_corpus")
            logger.critical(e)
            raise e
        from graminspect.stats import evaluate

        cfg = self._config
        corpus, graphs, frozen = self._train
        sentences = list(corpus)
        rng_init, rng_shuffle, rng_drop = spawn_rngs(cfg.seed, 3)

        tagger = Tagger(model, Vocab.build(corpus)).init(rng_init)
        optimizer = Adam(lr=cfg.lr)
        rate = cfg.dropout_for(model.variant)
        logger.info(f"Training variant {model.variant} ({tagger.store.n_values()} parameters) on {len(sentences)} sentences, seed {cfg.seed}.")

        rows = []
        best_score, best_store, best_epoch = -np.inf, None, 0
        epochs = tqdm(range(1, cfg.epochs + 1), desc=f"train {model.variant}", disable=not aux.verbose(), leave=False)
        for epoch in epochs:
            order = rng_shuffle.permutation(len(sentences))
            total = 0.0
            for batch_no, start in enumerate(range(0, len(order), cfg.batch_size), start=1):
                batch = order[start : start + cfg.batch_size]
                grads = {}
                batch_loss = 0.0
                for idx in batch:
                    sentence = sentences[idx]
                    graph, row = _inputs(sentence, graphs, frozen)
                    batch_loss += tagger.loss(sentence, graph, row, rng=rng_drop, dropout=rate, grads=grads)
                check_finite(batch_loss, epoch=epoch, batch=batch_no)
                for name in grads:
                    grads[name] /= len(batch)
                optimizer.step(tagger.store, grads)
                total += batch_loss

            row = {"epoch": epoch, "loss": total / len(sentences)}
            message = f"epoch {epoch}: loss {row['loss']:.6f}"
            if self._validation is not None:
                val_corpus, val_graphs, val_frozen = self._validation
                report = evaluate(predict_corpus(tagger, val_corpus, val_graphs, val_frozen), val_corpus)
                for level in defaults.objectives:
                    row[level] = report.f1(level)
                message += "  " + "  ".join(f"{level} F1 {row[level]:.4f}" for level in defaults.objectives)
                if row[cfg.objective] > best_score:
                    best_score, best_store, best_epoch = row[cfg.objective], tagger.store.copy(), epoch
            logger.info(message)
            rows.append(row)

        if best_store is not None:
            tagger.store = best_store
            epoch = best_epoch
        else:
            epoch = cfg.epochs

        columns = ["epoch", "loss"] + (list(defaults.objectives) if self._validation is not None else [])
        self._history = pd.DataFrame(rows, columns=columns)
        self._checkpoint = Checkpoint.from_tagger(tagger, seed=cfg.seed, epoch=epoch)
        return self._checkpoint
