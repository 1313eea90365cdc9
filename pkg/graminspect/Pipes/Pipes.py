"""
This module contains lightweight pipelines that chain training, prediction and file
saving for many models at once.

The ``Farm`` trains one model per seed (all of the same variant), writes each checkpoint
and its predictions on an evaluation split, and finally writes a model list that the
``ensemble`` and ``tune`` commands accept directly:

.. code-block:: python

    from graminspect.Pipes import Farm

    farm = Farm(ModelConfig.from_profile("toy", "A"), TrainConfig.from_profile("toy"), size=5)
    farm.link(train, graphs=train_graphs)
    farm.link_eval(dev, graphs=dev_graphs)
    farm.save_to("farm_A")
    farm.run()

    predictions = farm.predictions()

Each seed is trained in isolation, so the results do not depend on the number of worker
processes (``workers``).
"""

import multiprocessing
import os

import graminspect._auxiliary as aux
import graminspect._auxiliary.warnings as aw
import graminspect.defaults as defaults
from graminspect.Readers import write_manifest, write_predictions
from graminspect.Tagger import ModelConfig, TrainConfig, Trainer, predict_corpus, save_checkpoint

logger = aux.default_logger()


class Pipeline:
    """
    The basic template class for graminspect pipelines. It ensures that the elementary
    inputs are provided before the actual ``_run`` is called.
    """

    __slots__ = ["_train", "_eval", "_validation", "_save_to"]

    def __init__(self):
        self._train = None
        self._eval = None
        self._validation = None
        self._save_to = None

    def link(self, corpus, graphs: dict = None, frozen=None):
        """
        Links the training corpus and the per-sentence inputs the variant needs.
        """
        self._train = (corpus, graphs, frozen)

    def link_eval(self, corpus, graphs: dict = None, frozen=None):
        """
        Links the split every trained model predicts on.
        """
        self._eval = (corpus, graphs, frozen)

    def link_validation(self, corpus, graphs: dict = None, frozen=None):
        """
        Links a validation split used for model selection during training.
        """
        self._validation = (corpus, graphs, frozen)

    def save_to(self, directory: str):
        """
        Set the location where to save result files (created if necessary).
        """
        self._save_to = directory
        os.makedirs(directory, exist_ok=True)

    def run(self, **kwargs):
        """
        Runs the pipeline, provided that a training corpus was linked.
        The functional core of each pipeline is its ``_run()`` method.
        """
        if self._train is None or self._train[0] is None or len(self._train[0]) == 0:
            e = aw.PipeError("no_data")
            logger.critical(e)
            raise e
        return self._run(**kwargs)

    def _run(self, **kwargs):
        raise NotImplementedError(f"{self.__class__.__name__} does not define _run()")


def _train_seed(job):
    """
    Trains, saves and applies the model of one seed (runs inside a worker process).
    """
    model, config, seed, train, validation, evaluation, paths = job
    trainer = Trainer(config.replace(seed=seed))
    trainer.link(*train)
    if validation is not None:
        trainer.link_validation(*validation)
    checkpoint = trainer.pipe(model)

    predictions = None
    if evaluation is not None:
        corpus, graphs, frozen = evaluation
        predictions = predict_corpus(checkpoint.tagger(), corpus, graphs, frozen, model_id=f"{model.variant}-seed{seed}", is_lgn=model.variant == "C")

    if paths is not None:
        ckpt_path, pred_path = paths
        save_checkpoint(checkpoint, ckpt_path)
        if predictions is not None:
            write_predictions(predictions, pred_path)
    return seed, checkpoint, trainer.history(), predictions


class Farm(Pipeline):
    """
    Trains one model per seed for an ensemble.

    Parameters
    ----------
    model : ModelConfig
        The architecture shared by all models.
    config : TrainConfig
        The training schedule; its seed is the first seed of the farm.
    size : int
        The number of models. By default the farm size of the variant
        (``defaults.farm_sizes``).
    seeds : list
        Explicit seeds (overrides `size`).
    workers : int
        The number of worker processes (1 trains in the current process).
    """

    __slots__ = ["_model", "_config", "_seeds", "_workers", "_results", "_manifest"]

    def __init__(self, model: ModelConfig, config: TrainConfig = None, size: int = None, seeds: list = None, workers: int = 1):
        super().__init__()
        self._model = model
        self._config = TrainConfig.from_profile() if config is None else config
        if seeds is None:
            size = defaults.farm_sizes[model.variant] if size is None else size
            seeds = [self._config.seed + i for i in range(size)]
        if len(seeds) == 0 or len(set(seeds)) != len(seeds):
            e = aw.TaggerError("bad_config", reason="a farm needs at least one seed and no duplicate seeds")
            logger.error(e)
            raise e
        self._seeds = [int(s) for s in seeds]
        self._workers = max(1, int(workers))
        self._results = []
        self._manifest = None

    def seeds(self):
        return list(self._seeds)

    def _paths(self, seed):
        if self._save_to is None:
            return None
        stem = os.path.join(self._save_to, f"{self._model.variant}-seed{seed}")
        return f"{stem}.ckpt", f"{stem}.pred.tsv"

    def _run(self):
        jobs = [(self._model, self._config, seed, self._train, self._validation, self._eval, self._paths(seed)) for seed in self._seeds]
        logger.info(f"Training a farm of {len(jobs)} variant {self._model.variant} models with {self._workers} worker(s).")
        if self._workers == 1:
            results = [_train_seed(job) for job in jobs]
        else:
            with multiprocessing.Pool(processes=self._workers) as pool:
                results = list(pool.imap(_train_seed, jobs))
        self._results = results

        if self._save_to is not None and self._eval is not None:
            self._manifest = os.path.join(self._save_to, "manifest.tsv")
            is_lgn = self._model.variant == "C"
            write_manifest([(os.path.basename(self._paths(seed)[1]), is_lgn) for seed, *_ in results], self._manifest)
            logger.info(f"Wrote the model list {self._manifest}.")
        return self

    def _check_run(self):
        if not self._results:
            e = aw.PipeError("no_models")
            logger.error(e)
            raise e

    def checkpoints(self):
        """
        Returns
        -------
        list
            The checkpoints in seed order.
        """
        self._check_run()
        return [r[1] for r in self._results]

    def histories(self):
        """
        Returns
        -------
        dict
            seed -> training history.
        """
        self._check_run()
        return {r[0]: r[2] for r in self._results}

    def predictions(self):
        """
        Returns
        -------
        list
            The ``PredictionSet`` of every model on the evaluation split (seed order).
        """
        self._check_run()
        return [r[3] for r in self._results if r[3] is not None]

    def manifest(self):
        """The path of the written model list (None if nothing was saved)"""
        return self._manifest

    def get(self):
        return self._results
