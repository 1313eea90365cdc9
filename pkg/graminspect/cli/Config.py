"""
Run configuration of the command line tool.

Config files are flat UTF-8 text with one ``key = value`` pair per line; ``#`` starts a
comment. Values are resolved with the precedence

    defaults < profile < config file < command-line flags

where the profile ("paper" or "toy") may itself be chosen in the file or by a flag.

.. code-block::

    # toy.cfg
    profile = toy
    variant = A
    epochs = 30
    gat_dims = 16, 16
    corpus = data/train.jsonl
    parses = data/train.dep
"""

from dataclasses import asdict, dataclass, fields

import graminspect._auxiliary as aux
import graminspect._auxiliary.warnings as aw
import graminspect.defaults as defaults
from graminspect.Ensemble import EnsembleConfig
from graminspect.Tagger import ModelConfig, TrainConfig

logger = aux.default_logger()

ALIASES = {"learning_rate": "lr"}
"""Alternative spellings of config keys"""

PATHS = (
    "corpus",
    "parses",
    "dev",
    "dev_parses",
    "lexicon",
    "frozen",
    "checkpoint",
    "out",
    "models",
    "gold",
    "pred",
    "plot",
    "heatmap",
    "history",
)
"""The keys holding file paths"""

REQUIRED = {
    "train": ("corpus", "out"),
    "predict": ("checkpoint", "corpus", "out"),
    "ensemble": ("models", "out"),
    "tune": ("models", "gold", "out"),
    "evaluate": ("gold", "pred"),
    "graph": ("corpus", "out"),
    "farm": ("corpus", "out"),
    "stats": ("corpus",),
    "synth": ("out",),
}
"""The paths every command needs"""

_profile_keys = ("batch_size", "lr", "epochs", "dropout", "embedding_dim", "encoder_kind", "encoder_layers", "encoder_heads", "encoder_ffn", "max_len", "gat_dims", "gat_heads", "lstm_hidden")


def _ints(value):
    if isinstance(value, str):
        value = [v for v in value.replace(",", " ").split() if v]
    return tuple(int(v) for v in value)


def _optional_float(value):
    if value is None or (isinstance(value, str) and value.strip().lower() in ("none", "")):
        return None
    return float(value)


def _optional_str(value):
    return None if value is None or value == "" else str(value)


def _bool(value):
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ValueError(value)


@dataclass(frozen=True)
class RunConfig:
    """
    Every parameter of one command invocation, fully resolved.

    The model and training fields default to the "paper" profile; the paths default
    to None and are checked per command by ``require``.
    """

    command: str = None
    profile: str = defaults.default_profile
    variant: str = "A"
    seed: int = defaults.seed

    batch_size: int = defaults.paper["batch_size"]
    lr: float = defaults.paper["lr"]
    epochs: int = defaults.paper["epochs"]
    dropout: float = defaults.paper["dropout"]
    objective: str = defaults.default_objective

    embedding_dim: int = defaults.paper["embedding_dim"]
    encoder_kind: str = defaults.paper["encoder_kind"]
    encoder_layers: int = defaults.paper["encoder_layers"]
    encoder_heads: int = defaults.paper["encoder_heads"]
    encoder_ffn: int = defaults.paper["encoder_ffn"]
    max_len: int = defaults.paper["max_len"]
    gat_dims: tuple = defaults.paper["gat_dims"]
    gat_heads: tuple = defaults.paper["gat_heads"]
    lstm_hidden: int = defaults.paper["lstm_hidden"]
    frozen_dim: int = 0
    encoder_feed_layer: int = -1
    concat_gat_layer: int = -1

    theta1: float = defaults.thetas[0]
    theta2: float = defaults.thetas[1]
    theta3: float = defaults.thetas[2]
    tie_break: str = defaults.tie_break

    size: int = None
    workers: int = 1
    n: int = 500
    error_rate: float = 0.7
    permissive: bool = False
    is_lgn: bool = None
    model_id: str = None

    corpus: str = None
    parses: str = None
    dev: str = None
    dev_parses: str = None
    lexicon: str = None
    frozen: str = None
    checkpoint: str = None
    out: str = None
    models: str = None
    gold: str = None
    pred: str = None
    plot: str = None
    heatmap: str = None
    history: str = None

    def model_config(self):
        """
        Returns
        -------
        ModelConfig
        """
        return ModelConfig(
            variant=self.variant,
            embedding_dim=self.embedding_dim,
            encoder_kind=self.encoder_kind,
            encoder_layers=self.encoder_layers,
            encoder_heads=self.encoder_heads,
            encoder_ffn=self.encoder_ffn,
            max_len=self.max_len,
            gat_dims=self.gat_dims,
            gat_heads=self.gat_heads,
            lstm_hidden=self.lstm_hidden,
            frozen_dim=self.frozen_dim,
            encoder_feed_layer=self.encoder_feed_layer,
            concat_gat_layer=self.concat_gat_layer,
        )

    def train_config(self):
        """
        Returns
        -------
        TrainConfig
        """
        return TrainConfig(batch_size=self.batch_size, lr=self.lr, epochs=self.epochs, dropout=self.dropout, seed=self.seed, objective=self.objective)

    def ensemble_config(self):
        """
        Returns
        -------
        EnsembleConfig
        """
        return EnsembleConfig(self.theta1, self.theta2, self.theta3, tie_break=self.tie_break, objective=self.objective)

    def require(self, *keys):
        """
        Raises a ``ConfigError`` naming the first of `keys` that is unset.
        """
        for key in keys or REQUIRED.get(self.command, ()):
            if getattr(self, key) is None:
                e = aw.ConfigError("missing_path", command=self.command, key=key)
                logger.error(e)
                raise e
        return self

    def to_dict(self):
        d = asdict(self)
        d["gat_dims"] = list(self.gat_dims)
        d["gat_heads"] = list(self.gat_heads)
        return d


_FIELDS = {f.name: f for f in fields(RunConfig)}

_PARSERS = {
    "seed": int,
    "batch_size": int,
    "lr": float,
    "epochs": int,
    "dropout": _optional_float,
    "embedding_dim": int,
    "encoder_layers": int,
    "encoder_heads": int,
    "encoder_ffn": int,
    "max_len": int,
    "gat_dims": _ints,
    "gat_heads": _ints,
    "lstm_hidden": int,
    "frozen_dim": int,
    "encoder_feed_layer": int,
    "concat_gat_layer": int,
    "theta1": float,
    "theta2": float,
    "theta3": float,
    "size": int,
    "workers": int,
    "n": int,
    "error_rate": float,
    "permissive": _bool,
    "is_lgn": _bool,
}

_EXPECTED = {int: "an integer", float: "a number", _ints: "a list of integers", _optional_float: "a number or 'none'", _bool: "a boolean"}

_CHOICES = {
    "profile": tuple(defaults.profiles),
    "variant": defaults.variants,
    "objective": defaults.objectives,
    "encoder_kind": ("embedding", "transformer"),
    "tie_break": ("width", "votes"),
}


def _key(key, line=None):
    key = ALIASES.get(key, key)
    if key not in _FIELDS or key == "command":
        e = aw.ConfigError("unknown_key", key=key, line=line if line is not None else "-")
        logger.error(e)
        raise e
    return key


def _convert(key, value):
    """
    Converts a raw value to the type of its key.
    """
    parser = _PARSERS.get(key, _optional_str)
    try:
        converted = parser(value)
    except (TypeError, ValueError):
        e = aw.ConfigError("type_mismatch", key=key, expected=_EXPECTED.get(parser, "a string"), value=value)
        logger.error(e)
        raise e
    if key in _CHOICES and converted not in _CHOICES[key]:
        e = aw.ConfigError("type_mismatch", key=key, expected=f"one of {_CHOICES[key]}", value=value)
        logger.error(e)
        raise e
    return converted


def read_config(filename: str):
    """
    Reads a key = value config file.

    Returns
    -------
    dict
        The converted values in file order (later lines win).
    """
    values = {}
    with open(filename, "r", encoding=defaults.encoding) as f:
        for line_no, raw in enumerate(f, start=1):
            text = raw.split("#", 1)[0].strip()
            if not text:
                continue
            key, sep, value = text.partition("=")
            if not sep or not key.strip():
                e = aw.ConfigError("bad_line", line=line_no, text=raw.rstrip("\n"))
                logger.error(e)
                raise e
            key = _key(key.strip(), line_no)
            values[key] = _convert(key, value.strip())
    return values


def load_config(path: str = None, overrides: dict = None, command: str = None):
    """
    Resolves a run configuration.

    Parameters
    ----------
    path : str
        A config file (optional).
    overrides : dict
        Command-line values; None values count as "not given".
    command : str
        The command the configuration is for.

    Returns
    -------
    RunConfig
    """
    file_values = read_config(path) if path is not None else {}
    flag_values = {}
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        key = _key(key)
        flag_values[key] = _convert(key, value)

    profile = flag_values.get("profile", file_values.get("profile", defaults.default_profile))
    values = {k: defaults.profiles[profile][k] for k in _profile_keys}
    values.update(file_values)
    values.update(flag_values)
    values["profile"] = profile
    config = RunConfig(command=command, **values)
    logger.info(f"Resolved the {command} configuration (profile {profile}, {len(file_values)} file and {len(flag_values)} flag values).")
    return config
