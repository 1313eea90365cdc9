"""
The ``graminspect`` command line tool.

.. code-block:: bash

    graminspect synth --out data --n 500 --seed 7
    graminspect train --config toy.cfg --seed 7 --out model.ckpt --plot history.png
    graminspect predict --checkpoint model.ckpt --corpus test.jsonl --parses test.dep --out pred.tsv
    graminspect ensemble --models manifest.tsv --theta1 0.6 --theta2 0.5 --theta3 0.5 --out ens.tsv
    graminspect tune --models manifest.tsv --gold dev.jsonl --out tuning.tsv --heatmap tuning.png
    graminspect evaluate --gold test.jsonl --pred ens.tsv

Every command that writes an artifact also writes a run log next to it
(``<artifact>.runlog.json``) holding the resolved configuration, the seed, the sha256 of
every input file and the tool version. Exit codes: 0 success, 2 usage or config error,
3 unreadable input, 4 numeric failure, 5 checkpoint integrity failure, 1 anything else.
"""

import argparse
import os
import sys

import graminspect._auxiliary as aux
import graminspect._auxiliary.warnings as aw
import graminspect.defaults as defaults
from graminspect.cli.Config import PATHS, REQUIRED, load_config
from graminspect.Ensemble import Ensembler, save_report, tune_thresholds
from graminspect.Graphs import build_graphs
from graminspect.Pipes import Farm
from graminspect.Plotters import plot_history, plot_thresholds
from graminspect.main.Synthetic import generate
from graminspect.main import read_corpus, read_lexicon, read_parses, read_predictions, write_predictions
from graminspect.Readers import ModelManifestReader, write_corpus, write_dependencies, write_lexicon
from graminspect.Tagger import FrozenEmbeddingTable, Trainer, load_checkpoint, predict, save_checkpoint
from graminspect.stats import evaluate

logger = aux.default_logger()

_EXIT = {
    aw.ConfigError: "usage",
    aw.ReaderError: "input",
    aw.CorpusError: "input",
    aw.GraphError: "input",
    aw.NumericsError: "numeric",
    aw.CheckpointError: "integrity",
}


def exit_code(error: Exception):
    """
    Maps an exception onto the exit status of its error family.
    """
    for cls, family in _EXIT.items():
        if isinstance(error, cls):
            return defaults.exit_codes[family]
    if isinstance(error, (FileNotFoundError, IsADirectoryError, UnicodeDecodeError)):
        return defaults.exit_codes["input"]
    return defaults.exit_codes["failure"]


# =============================================================================
# helpers
# =============================================================================


def runlog_path(out: str):
    """
    Returns the run log location of an artifact (a file inside directories).
    """
    if os.path.isdir(out):
        return os.path.join(out, "run" + defaults.runlog_suffix)
    return out + defaults.runlog_suffix


def write_runlog(config, out: str, inputs: list):
    """
    Writes the sidecar run log of an artifact.

    Parameters
    ----------
    config : RunConfig
        The resolved configuration (echoed verbatim).
    out : str
        The artifact path.
    inputs : list
        The input files read by the command.
    """
    record = {
        "command": config.command,
        "config": config.to_dict(),
        "seed": config.seed,
        "inputs": {path: aux.file_checksum(path) for path in sorted(set(inputs)) if path is not None and os.path.isfile(path)},
        "version": defaults.version,
    }
    filename = runlog_path(out)
    with open(filename, "w", encoding=defaults.encoding, newline="\n") as f:
        f.write(aux.canonical_json(record) + "\n")
    logger.info(f"Wrote the run log {filename}.")
    return filename


def _inputs(config):
    return [getattr(config, key) for key in PATHS if key not in ("out", "plot", "heatmap", "history")]


def _graphs(config, corpus, parses_key: str, variant: str):
    """
    Reads the per-sentence graphs a variant needs (`parses_key` names the parse file).
    """
    if variant == "A":
        config.require(parses_key)
        return build_graphs(corpus, "A", parses=read_parses(getattr(config, parses_key), corpus))
    if variant == "C":
        config.require("lexicon")
        return build_graphs(corpus, "C", lexicon=read_lexicon(config.lexicon))
    return None


def _frozen(config, variant: str):
    if variant != "B":
        return None
    config.require("frozen")
    return FrozenEmbeddingTable.load(config.frozen)


def _model_config(config, frozen):
    model = config.model_config()
    if model.variant == "B" and model.frozen_dim == 0 and frozen is not None:
        model = model.replace(frozen_dim=frozen.width)
    return model


def _split(config, path, parses_key, variant, frozen):
    corpus = read_corpus(path)
    return corpus, _graphs(config, corpus, parses_key, variant), frozen


# =============================================================================
# commands
# =============================================================================


def _train_command(config):
    frozen = _frozen(config, config.variant)
    corpus, graphs, _ = _split(config, config.corpus, "parses", config.variant, frozen)
    trainer = Trainer(config.train_config())
    trainer.link(corpus, graphs=graphs, frozen=frozen)
    if config.dev is not None:
        dev, dev_graphs, _ = _split(config, config.dev, "dev_parses", config.variant, frozen)
        trainer.link_validation(dev, graphs=dev_graphs, frozen=frozen)

    checkpoint = trainer.pipe(_model_config(config, frozen))
    save_checkpoint(checkpoint, config.out)

    history = config.history or config.out + ".history.tsv"
    trainer.history().to_csv(history, sep="\t", index=False, float_format="%.6f", lineterminator="\n")
    if config.plot is not None:
        plot_history(trainer.history(), filename=config.plot)
    write_runlog(config, config.out, _inputs(config))
    print(f"saved {config.out} (epoch {checkpoint.epoch}, fingerprint {checkpoint.fingerprint()[:12]})")
    return 0


def _predict_command(config):
    checkpoint = load_checkpoint(config.checkpoint)
    variant = checkpoint.config.variant
    frozen = _frozen(config, variant)
    corpus, graphs, _ = _split(config, config.corpus, "parses", variant, frozen)
    model_id = config.model_id or aux.fileID(config.checkpoint)
    predictions = predict(checkpoint, corpus, graphs, frozen, model_id=model_id, is_lgn=config.is_lgn, strict=not config.permissive)
    write_predictions(predictions, config.out)
    write_runlog(config, config.out, _inputs(config))
    print(f"predicted {predictions.n_spans()} spans in {len(predictions)} sentences")
    return 0


def _models(config):
    """
    Reads the model list and returns the prediction sets with the files they came from.
    """
    reader = ModelManifestReader()
    predictions = reader.pipe(config.models)
    return predictions, [path for path, _ in reader.get()]


def _ensemble_command(config):
    predictions, files = _models(config)
    ensembler = Ensembler(config.ensemble_config())
    result = ensembler.pipe(predictions)
    write_predictions(result, config.out)
    write_runlog(config, config.out, _inputs(config) + files)
    print(f"ensembled {len(predictions)} models into {result.n_spans()} spans")
    return 0


def _tune_command(config):
    predictions, files = _models(config)
    gold = read_corpus(config.gold)
    best, table = tune_thresholds(predictions, gold, objective=config.objective, tie_break=config.tie_break)
    save_report(table, config.out)
    if config.heatmap is not None:
        plot_thresholds(table, objective=config.objective, filename=config.heatmap)
    write_runlog(config, config.out, _inputs(config) + files)
    print(f"theta1 = {best.theta1:.2f}\ntheta2 = {best.theta2:.2f}\ntheta3 = {best.theta3:.2f}")
    return 0


def _evaluate_command(config):
    gold = read_corpus(config.gold)
    predictions = read_predictions(config.pred)
    report = evaluate(predictions, gold)
    if config.out is not None:
        report.save(config.out)
        write_runlog(config, config.out, _inputs(config))
    print(report.table())
    return 0


def _graph_command(config):
    if config.variant not in ("A", "C"):
        e = aw.ConfigError("type_mismatch", key="variant", expected="'A' or 'C' for graph dumps", value=config.variant)
        logger.error(e)
        raise e
    corpus = read_corpus(config.corpus)
    graphs = _graphs(config, corpus, "parses", config.variant)
    with open(config.out, "w", encoding=defaults.encoding, newline="\n") as f:
        f.write("sid\ti\tj\tprovenance\n")
        for sentence in corpus:
            table = graphs[sentence.id].edge_table()
            for i, j, provenance in table.itertuples(index=False):
                f.write(f"{sentence.id}\t{i}\t{j}\t{provenance}\n")
    write_runlog(config, config.out, _inputs(config))
    print(f"dumped the graphs of {len(graphs)} sentences")
    return 0


def _farm_command(config):
    frozen = _frozen(config, config.variant)
    corpus, graphs, _ = _split(config, config.corpus, "parses", config.variant, frozen)
    size = config.size
    if size is None:
        size = defaults.toy_farm_size if config.profile == "toy" else defaults.farm_sizes[config.variant]
    farm = Farm(_model_config(config, frozen), config.train_config(), size=size, workers=config.workers)
    farm.link(corpus, graphs=graphs, frozen=frozen)
    if config.dev is not None:
        dev, dev_graphs, _ = _split(config, config.dev, "dev_parses", config.variant, frozen)
        farm.link_eval(dev, graphs=dev_graphs, frozen=frozen)
    farm.save_to(config.out)
    farm.run()
    write_runlog(config, config.out, _inputs(config))
    print(f"trained {len(farm.seeds())} models" + (f", model list {farm.manifest()}" if farm.manifest() else ""))
    return 0


def _stats_command(config):
    corpus = read_corpus(config.corpus)
    print(corpus.statistics().to_string())
    return 0


def _synth_command(config):
    data = generate(config.n, seed=config.seed, error_rate=config.error_rate)
    os.makedirs(config.out, exist_ok=True)
    write_corpus(data.corpus, os.path.join(config.out, "corpus.jsonl"))
    write_dependencies([data.parses[s.id] for s in data.corpus], os.path.join(config.out, "corpus.dep"))
    write_lexicon(data.lexicon.words(), os.path.join(config.out, "lexicon.txt"))
    write_runlog(config, config.out, [])
    print(f"generated {len(data.corpus)} sentences in {config.out}")
    return 0


_COMMANDS = {
    "train": (_train_command, "Train one tagger"),
    "predict": (_predict_command, "Predict error spans with a trained tagger"),
    "ensemble": (_ensemble_command, "Ensemble the predictions of many models"),
    "tune": (_tune_command, "Search the ensemble thresholds on a gold split"),
    "evaluate": (_evaluate_command, "Score predictions on the three diagnosis levels"),
    "graph": (_graph_command, "Dump the dependency or lexicon graphs as an edge list"),
    "farm": (_farm_command, "Train one model per seed for an ensemble"),
    "stats": (_stats_command, "Print the error statistics of a corpus"),
    "synth": (_synth_command, "Generate a synthetic corpus with parses and lexicon"),
}

# flag name -> (command list or None for all, argparse kwargs)
_FLAGS = {
    "profile": (None, dict(choices=tuple(defaults.profiles))),
    "seed": (None, dict(type=int, help="The seed all randomness flows from")),
    "variant": (("train", "farm", "graph"), dict(choices=defaults.variants)),
    "corpus": (("train", "predict", "graph", "farm", "stats"), dict(help="A gold corpus (JSON lines)")),
    "parses": (("train", "predict", "graph", "farm"), dict(help="Dependency parses of the corpus")),
    "dev": (("train", "farm"), dict(help="A validation / evaluation split")),
    "dev-parses": (("train", "farm"), dict(help="Dependency parses of the validation split")),
    "lexicon": (("train", "predict", "graph", "farm"), dict(help="A lexicon (one word per line)")),
    "frozen": (("train", "predict", "farm"), dict(help="A frozen embedding file (variant B)")),
    "checkpoint": (("predict",), dict()),
    "models": (("ensemble", "tune"), dict(help="A model list (prediction file, is_lgn)")),
    "gold": (("tune", "evaluate"), dict()),
    "pred": (("evaluate",), dict()),
    "out": (None, dict(help="The output file (or directory for farm and synth)")),
    "epochs": (("train", "farm"), dict(type=int)),
    "batch-size": (("train", "farm"), dict(type=int)),
    "lr": (("train", "farm"), dict(type=float)),
    "learning-rate": (("train", "farm"), dict(type=float, dest="learning_rate")),
    "dropout": (("train", "farm"), dict()),
    "frozen-dim": (("train", "farm"), dict(type=int)),
    "objective": (("train", "farm", "tune", "ensemble"), dict(choices=defaults.objectives)),
    "theta1": (("ensemble",), dict(type=float)),
    "theta2": (("ensemble",), dict(type=float)),
    "theta3": (("ensemble",), dict(type=float)),
    "tie-break": (("ensemble", "tune"), dict(choices=("width", "votes"))),
    "size": (("farm",), dict(type=int, help="The number of models")),
    "workers": (("farm",), dict(type=int)),
    "n": (("synth",), dict(type=int, help="The number of sentences")),
    "error-rate": (("synth",), dict(type=float)),
    "model-id": (("predict",), dict()),
    "plot": (("train",), dict(help="Save the training curve to this file")),
    "heatmap": (("tune",), dict(help="Save the threshold heatmap to this file")),
    "history": (("train",), dict(help="The training history TSV (default <out>.history.tsv)")),
}


def _parser():
    parser = argparse.ArgumentParser(prog="graminspect", description="Grammatical error detection with graph-attention taggers and ensembles.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {defaults.version}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, (func, help) in _COMMANDS.items():
        sub = subparsers.add_parser(name, help=help)
        sub.set_defaults(func=func)
        sub.add_argument("--config", help="A key = value config file")
        sub.add_argument("--log-level", default="WARNING", choices=("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"))
        for flag, (commands, kwargs) in _FLAGS.items():
            if commands is None or name in commands:
                sub.add_argument(f"--{flag}", default=None, **kwargs)
        if name == "predict":
            lgn = sub.add_mutually_exclusive_group()
            lgn.add_argument("--is-lgn", dest="is_lgn", action="store_const", const=True, default=None)
            lgn.add_argument("--no-lgn", dest="is_lgn", action="store_const", const=False)
            sub.add_argument("--permissive", action="store_const", const=True, default=None, help="Zero-fill missing frozen rows")
    return parser


def dispatch(args):
    """
    Resolves the configuration of parsed arguments and runs their command.
    """
    overrides = {k: v for k, v in vars(args).items() if k not in ("func", "command", "config", "log_level")}
    config = load_config(args.config, overrides, command=args.command)
    config.require(*REQUIRED[args.command])
    return args.func(config)


def main(argv: list = None) -> int:
    """
    Runs the command line tool.

    Returns
    -------
    int
        The exit status.
    """
    args = _parser().parse_args(argv)
    aux.set_level(args.log_level)
    try:
        return dispatch(args)
    except (aw.ClassError, OSError, UnicodeDecodeError) as error:
        print(f"graminspect {args.command}: {error}", file=sys.stderr)
        return exit_code(error)


if __name__ == "__main__":
    sys.exit(main())
