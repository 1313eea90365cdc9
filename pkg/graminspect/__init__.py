import graminspect.defaults as defaults
from graminspect.main import *
from graminspect.stats import Evaluator, evaluate
from graminspect.Ensemble import EnsembleConfig, Ensembler, tune_thresholds
from graminspect.Tagger import ModelConfig, TrainConfig, Tagger, train, predict, load_checkpoint, save_checkpoint
from graminspect._auxiliary import log, default_logger, extensive_logger, set_level

__version__ = defaults.version
