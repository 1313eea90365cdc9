import pytest

import graminspect._auxiliary.warnings as aw
from graminspect.Ensemble import EnsembleConfig, default_grid, ensemble_sentence, save_report, tune_thresholds
from graminspect.Ensemble.Tuner import REPORT_COLUMNS
from graminspect.main import PredictionSet
from graminspect.stats import score_spans


def test_default_grid():
    grid = default_grid()
    assert len(grid) == 19
    assert grid[0] == 0.05 and grid[-1] == 0.95
    assert grid[1] == 0.1


@pytest.fixture
def members(tiny_corpus):
    gold = tiny_corpus.gold_predictions()
    noisy = PredictionSet("noisy", {"s1": {(1, 1, "W")}, "s2": {(2, 3, "S")}, "s3": {(3, 4, "S")}})
    quiet = PredictionSet("quiet", {"s1": set(), "s2": set(), "s3": set()})
    return [PredictionSet("a", dict(gold.items())), PredictionSet("b", dict(gold.items())), noisy, quiet]


def test_tuning_table(members, tiny_corpus):
    grid = (0.2, 0.5, 0.8)
    config, table = tune_thresholds(members, tiny_corpus, grid=grid)
    assert list(table.columns) == REPORT_COLUMNS
    assert len(table) == 27
    best = table["identification"].max()
    # the reported config reproduces the best score and is the first point reaching it
    first = table[table["identification"] == best].iloc[0]
    assert config.thetas == (first["theta1"], first["theta2"], first["theta3"])
    spans = {sid: ensemble_sentence(members, sid, config) for sid in tiny_corpus.ids()}
    assert score_spans(spans, tiny_corpus).f1("identification") == pytest.approx(best)


def test_tuning_axes_and_objective(members, tiny_corpus):
    config, table = tune_thresholds(members, tiny_corpus, grid=[(0.4,), (0.3, 0.6), (0.1,)], objective="position")
    assert len(table) == 2
    assert config.theta1 == 0.4 and config.theta3 == 0.1
    assert config.objective == "position"
    assert isinstance(config, EnsembleConfig)


def test_empty_grid(members, tiny_corpus):
    with pytest.raises(aw.EnsembleError) as err:
        tune_thresholds(members, tiny_corpus, grid=[])
    assert err.value.msg == "empty_grid"


def test_save_report(tmp_path, members, tiny_corpus):
    _, table = tune_thresholds(members, tiny_corpus, grid=(0.5,))
    filename = tmp_path / "tune.tsv"
    save_report(table, str(filename))
    lines = filename.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "\t".join(REPORT_COLUMNS)
    assert lines[1].startswith("0.5000\t0.5000\t0.5000\t")
