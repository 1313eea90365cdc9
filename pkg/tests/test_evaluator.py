import pandas as pd
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import graminspect._auxiliary.warnings as aw
from graminspect.main import Corpus, ErrorSpan, PredictionSet, Sentence
from graminspect.stats import Evaluator, LevelCounts, evaluate, evaluate_many, f1, score_spans


@pytest.fixture
def predictions():
    return PredictionSet("m", {"s1": {(8, 8, "R")}, "s2": {(1, 1, "W")}, "s3": {(3, 4, "S")}})


def test_perfect_predictions(tiny_corpus):
    report = evaluate(tiny_corpus.gold_predictions(), tiny_corpus)
    for level in ("detection", "identification", "position"):
        assert report.precision(level) == report.recall(level) == report.f1(level) == 1.0


def test_levels(tiny_corpus, predictions):
    report = evaluate(predictions, tiny_corpus)
    assert report.counts["detection"] == LevelCounts(tp=2, fp=1, fn=0)
    assert report.f1("detection") == pytest.approx(0.8)
    assert report.counts["identification"] == LevelCounts(tp=2, fp=1, fn=1)
    assert report.f1("identification") == pytest.approx(2 / 3)
    assert report.f1("position") == pytest.approx(2 / 3)


def test_empty_predictions_score_zero(tiny_corpus):
    report = evaluate(PredictionSet("none", {"s2": set()}), tiny_corpus)
    assert report.counts["detection"] == LevelCounts(tp=0, fp=0, fn=2)
    assert report.precision("detection") == 0.0
    assert report.f1("position") == 0.0


def test_unlisted_sentences_count_as_correct(tiny_corpus):
    report = score_spans({"s1": {s for s in tiny_corpus.get("s1").gold}}, tiny_corpus)
    assert report.precision("position") == 1.0
    assert report.recall("position") == pytest.approx(1 / 3)


def test_unknown_sentence_is_rejected(tiny_corpus):
    with pytest.raises(aw.EvaluatorError) as err:
        evaluate(PredictionSet("m", {"s9": set()}), tiny_corpus)
    assert err.value.msg == "unknown_id"
    assert "s9" in str(err.value)


@given(st.floats(0, 1), st.floats(0, 1))
def test_f1_is_bounded_by_its_inputs(precision, recall):
    value = f1(precision, recall)
    assert min(precision, recall) - 1e-12 <= value <= max(precision, recall) + 1e-12


def test_f1_range():
    assert f1(0.0, 0.0) == 0.0
    with pytest.raises(aw.EvaluatorError) as err:
        f1(1.2, 0.5)
    assert err.value.msg == "out_of_range"


def test_report_frames(tmp_path, tiny_corpus, predictions):
    report = evaluate(predictions, tiny_corpus)
    df = report.to_df()
    assert list(df.columns) == ["level", "precision", "recall", "f1", "tp", "fp", "fn"]
    assert list(df["level"]) == ["detection", "identification", "position"]

    filename = tmp_path / "report.tsv"
    report.save(str(filename))
    lines = filename.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "level\tprecision\trecall\tf1\ttp\tfp\tfn"
    assert lines[1] == "detection\t0.6667\t1.0000\t0.8000\t2\t1\t0"
    assert "Identification" in report.table()


def test_compare_many(tiny_corpus, predictions):
    reports, table = evaluate_many([predictions, tiny_corpus.gold_predictions()], tiny_corpus)
    assert [r.model_id for r in reports] == ["m", "gold"]
    assert isinstance(table.columns, pd.MultiIndex)
    assert table.loc["gold", ("Position", "F1")] == 1.0
    assert table.loc["m", ("Detection", "Recall")] == 1.0


def test_evaluator_collects_reports(tiny_corpus, predictions):
    evaluator = Evaluator()
    evaluator.link(tiny_corpus)
    evaluator.pipe(predictions)
    evaluator.pipe(tiny_corpus.gold_predictions())
    assert len(evaluator.get()) == 2
    assert list(evaluator.table().index) == ["m", "gold"]


def test_two_sentence_counts():
    gold = Corpus([Sentence("s1", "我的的书很好", {(2, 2, "R")}), Sentence("s2", "他去学校", set())])
    report = evaluate(PredictionSet("m", {"s1": {(2, 3, "R")}, "s2": {(1, 1, "M")}}), gold)
    assert report.counts["detection"] == LevelCounts(tp=1, fp=1, fn=0)
    assert report.precision("detection") == 0.5
    assert report.recall("detection") == 1.0
    assert report.f1("detection") == pytest.approx(2 / 3)
    assert report.counts["identification"] == LevelCounts(tp=1, fp=1, fn=0)
    assert report.counts["position"] == LevelCounts(tp=0, fp=2, fn=1)
    assert report.f1("position") == 0.0


@pytest.mark.parametrize(
    "precision, recall, expected",
    [(0.8633, 0.8551, 0.8592), (0.9037, 0.9304, 0.9169), (1.0, 0.0, 0.0)],
)
def test_f1_reference_values(precision, recall, expected):
    assert f1(precision, recall) == pytest.approx(expected, abs=5e-5)


TEXT = "今天我们一起去看电影"

span_strategy = st.builds(lambda start, width, t: ErrorSpan(start, start + width, t), st.integers(1, 8), st.integers(0, 2), st.sampled_from("RMSW"))
# at most one gold error per sentence
gold_strategy = st.lists(st.lists(span_strategy, max_size=1), min_size=1, max_size=5)
predicted_strategy = st.lists(st.frozensets(span_strategy, max_size=4), min_size=1, max_size=5)


@given(gold_strategy, predicted_strategy)
@settings(max_examples=200, deadline=None)
def test_coarser_levels_never_match_less(gold_spans, predicted_spans):
    gold = Corpus([Sentence(f"s{i}", TEXT, set(spans)) for i, spans in enumerate(gold_spans)])
    predictions = PredictionSet("m", {f"s{i}": spans for i, spans in enumerate(predicted_spans[: len(gold_spans)])})
    report = evaluate(predictions, gold)
    tp = {level: report.counts[level].tp for level in ("detection", "identification", "position")}
    assert tp["position"] <= tp["identification"] <= tp["detection"]


def test_identification_counts_each_type_of_a_sentence():
    gold = Corpus([Sentence("s1", TEXT, {(2, 2, "R"), (5, 6, "S"), (8, 8, "S")})])
    report = evaluate(PredictionSet("m", {"s1": {(2, 2, "R"), (5, 6, "S"), (8, 8, "S")}}), gold)
    assert report.counts["detection"].tp == 1
    assert report.counts["identification"].tp == 2
    assert report.counts["position"].tp == 3
