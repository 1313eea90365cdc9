"""
Validation-driven selection of the ensemble thresholds.

Every (θ₁, θ₂, θ₃) of a grid is scored on a gold validation corpus and the best point at
the objective level wins; among equally good points the lexicographically smallest one is
kept. The stages depend on one threshold each, so their outputs are computed once per
threshold value and combined per grid point.
"""

import numpy as np
import pandas as pd
from tqdm import tqdm

import graminspect._auxiliary as aux
import graminspect._auxiliary.warnings as aw
import graminspect.defaults as defaults
from graminspect.Ensemble.Ensemble import EnsembleConfig, VoteTally, _check_models
from graminspect.stats.Evaluator import LEVELS, gold_items, score_spans

logger = aux.default_logger()

REPORT_COLUMNS = ["theta1", "theta2", "theta3", "detection", "identification", "position"]


def default_grid(start: float = defaults.theta_grid[0], stop: float = defaults.theta_grid[1], step: float = defaults.theta_grid[2]):
    """
    Returns the threshold values start, start + step, ..., stop (rounded to 10 decimals).
    """
    n = int(round((stop - start) / step)) + 1
    return tuple(float(v) for v in np.round(start + step * np.arange(n), 10))


def _axes(grid):
    if grid is None:
        grid = default_grid()
    grid = list(grid)
    if grid and np.ndim(grid[0]) > 0:
        axes = [tuple(float(v) for v in axis) for axis in grid]
    else:
        axes = [tuple(float(v) for v in grid)] * 3
    if len(axes) != 3 or any(len(axis) == 0 for axis in axes):
        e = aw.EnsembleError("empty_grid")
        logger.error(e)
        raise e
    return [tuple(sorted(set(axis))) for axis in axes]


def tune_thresholds(predictions: list, gold, grid=None, objective: str = defaults.default_objective, tie_break: str = defaults.tie_break):
    """
    Searches the threshold grid exhaustively.

    Parameters
    ----------
    predictions : list
        ``PredictionSet`` objects of the member models on the validation sentences.
    gold : Corpus
        The gold validation corpus.
    grid : sequence
        Either one sequence of values used for all three thresholds or three sequences
        (θ₁, θ₂, θ₃). By default 0.05, 0.10, ..., 0.95.
    objective : str
        "detection", "identification" or "position".
    tie_break : str
        The stage-1 tie-break policy.

    Returns
    -------
    config : EnsembleConfig
        The best thresholds.
    table : pd.DataFrame
        The F1 of every level for every grid point (columns `theta1`, `theta2`, `theta3`,
        `detection`, `identification`, `position`).
    """
    axes = _axes(grid)
    base = EnsembleConfig(objective=objective, tie_break=tie_break)
    _check_models(predictions)

    sids = sorted({sid for p in predictions for sid in p.ids()})
    tallies = [VoteTally(predictions, sid) for sid in sids]
    stage1 = {t1: [tally.stage1(t1, tie_break) for tally in tallies] for t1 in axes[0]}
    stage2 = {t2: [tally.stage2(t2) for tally in tallies] for t2 in axes[1]}
    fallback = [tally.fallback() for tally in tallies]
    gold_sets = gold_items(gold)

    rows = []
    best, best_score = None, -np.inf
    for t1 in tqdm(axes[0], desc="tune", disable=not aux.verbose(), leave=False):
        for t2 in axes[1]:
            merged = [a | b for a, b in zip(stage1[t1], stage2[t2])]
            for t3 in axes[2]:
                spans = {}
                for sid, tally, union, fb in zip(sids, tallies, merged, fallback):
                    if not union and fb is not None and tally.total_errors > t3 * tally.n_models:
                        union = {fb}
                    spans[sid] = union
                report = score_spans(spans, gold, gold_sets=gold_sets)
                scores = [report.f1(level) for level in LEVELS]
                rows.append([t1, t2, t3] + scores)
                score = report.f1(objective)
                if score > best_score:
                    best, best_score = (t1, t2, t3), score

    table = pd.DataFrame(rows, columns=REPORT_COLUMNS)
    config = base.replace(theta1=best[0], theta2=best[1], theta3=best[2])
    logger.info(f"Best thresholds {best} with {objective} F1 {best_score:.4f} over {len(table)} grid points.")
    return config, table


def save_report(table: pd.DataFrame, filename: str):
    """
    Writes a tuning table as TSV.
    """
    table.to_csv(filename, sep="\t", index=False, float_format=f"%.{defaults.report_digits}f", lineterminator="\n")
