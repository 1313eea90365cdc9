"""
The three-stage voting ensemble and its threshold tuning.
"""

from .Ensemble import EnsembleConfig, Ensembler, VoteTally, ensemble_sentence, TIE_BREAKS
from .Tuner import tune_thresholds, default_grid, save_report
