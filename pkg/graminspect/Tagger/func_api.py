"""
These are the stand-alone functions to train and apply taggers.
"""

import graminspect.defaults as defaults
from graminspect.Tagger.Checkpoint import Checkpoint, load_checkpoint, save_checkpoint
from graminspect.Tagger.Tagger import ModelConfig, Tagger, TrainConfig
from graminspect.Tagger.Trainer import Trainer, predict_corpus


def model_forward(tagger: Tagger, sentence, graph=None, frozen=None):
    """
    Computes the emissions of one sentence without dropout.

    Parameters
    ----------
    tagger : Tagger
    sentence : Sentence
    graph : CharGraph
        Required by variants A (dependency graph) and C (lexicon graph).
    frozen : np.ndarray
        Required by variant B.

    Returns
    -------
    emissions : np.ndarray
        N x 9.
    trace : PipelineTrace
    """
    return tagger.forward(sentence, graph, frozen)


def train(corpus, config: TrainConfig = None, model: ModelConfig = None, graphs: dict = None, frozen=None, validation=None, val_graphs: dict = None, val_frozen=None):
    """
    Trains a tagger.

    Parameters
    ----------
    corpus : Corpus
        The training sentences.
    config : TrainConfig
        The schedule. By default the "paper" profile.
    model : ModelConfig
        The architecture. By default variant A of the "paper" profile.
    graphs, frozen
        The per-sentence inputs the variant needs.
    validation : Corpus
        An optional validation split (with `val_graphs` / `val_frozen`).

    Returns
    -------
    checkpoint : Checkpoint
    history : pd.DataFrame
    """
    model = ModelConfig.from_profile(defaults.default_profile) if model is None else model
    trainer = Trainer(config)
    trainer.link(corpus, graphs=graphs, frozen=frozen)
    if validation is not None:
        trainer.link_validation(validation, graphs=val_graphs, frozen=val_frozen)
    checkpoint = trainer.pipe(model)
    return checkpoint, trainer.history()


def predict(checkpoint, corpus, graphs: dict = None, frozen=None, config: ModelConfig = None, model_id: str = None, is_lgn: bool = None, strict: bool = True):
    """
    Predicts the error spans of every sentence with a trained model.

    Parameters
    ----------
    checkpoint : Checkpoint or Tagger
    corpus : Corpus
    graphs, frozen
        The per-sentence inputs the variant needs.
    config : ModelConfig
        If given, the checkpoint must have been made for exactly this configuration.
    model_id : str
        The id of the prediction set.
    is_lgn : bool
        By default True for variant C.
    strict : bool
        If False, missing frozen rows are zero-filled with a warning.

    Returns
    -------
    PredictionSet
    """
    if isinstance(checkpoint, Checkpoint):
        if config is not None:
            checkpoint.check(config)
        tagger = checkpoint.tagger()
    else:
        tagger = checkpoint
    return predict_corpus(tagger, corpus, graphs, frozen, model_id=model_id, is_lgn=is_lgn, strict=strict)
