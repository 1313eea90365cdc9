import json

import pytest

import graminspect._auxiliary.warnings as aw
from graminspect.main import ErrorSpan, PredictionSet, read_corpus, read_lexicon, read_models, read_parses, read_predictions, write_predictions
from graminspect.Readers import write_corpus, write_dependencies, write_manifest


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_read_corpus(tmp_path):
    records = [
        {"id": "a", "text": "对我来说", "errors": [{"start": 2, "end": 2, "type": "R"}]},
        {"id": "b", "text": "我们走吧", "errors": []},
    ]
    filename = _write(tmp_path / "gold.jsonl", "\n".join(json.dumps(r, ensure_ascii=False) for r in records) + "\n\n")
    corpus = read_corpus(filename)
    assert corpus.id() == "gold"
    assert corpus.ids() == ["a", "b"]
    assert corpus["a"].gold == {ErrorSpan(2, 2, "R")}


def test_read_empty_corpus(tmp_path):
    corpus = read_corpus(_write(tmp_path / "empty.jsonl", ""))
    assert len(corpus) == 0


@pytest.mark.parametrize(
    "line, key",
    [
        ('{"id": "a", "text": "abc"', "malformed_record"),
        ('{"id": "a", "text": "abc", "errors": [{"start": 2, "end": 5, "type": "R"}]}', "bad_span"),
        ('{"id": "a", "text": "abc", "errors": [{"start": 1, "end": 1, "type": "Q"}]}', "bad_span"),
        ('{"text": "abc", "errors": []}', "malformed_record"),
    ],
)
def test_read_corpus_errors(tmp_path, line, key):
    with pytest.raises(aw.ReaderError) as err:
        read_corpus(_write(tmp_path / "bad.jsonl", line + "\n"))
    assert err.value.msg == key
    assert "Line 1" in str(err.value)


def test_write_corpus_round_trip(tmp_path, tiny_corpus):
    filename = str(tmp_path / "tiny.jsonl")
    write_corpus(tiny_corpus, filename)
    again = read_corpus(filename)
    assert again.ids() == tiny_corpus.ids()
    assert all(again[s.id].gold == s.gold and again[s.id].text == s.text for s in tiny_corpus)


def test_prediction_file_is_canonical(tmp_path):
    text = "s2\t3\t4\tS\ns1\tcorrect\ns2\t1\t1\tR\n"
    filename = _write(tmp_path / "model.tsv", text)
    preds = read_predictions(filename, is_lgn=True)
    assert preds.model_id == "model"
    assert preds.is_lgn
    assert preds.get("s1") == frozenset()
    out = str(tmp_path / "canonical.tsv")
    write_predictions(preds, out)
    with open(out, encoding="utf-8") as f:
        assert f.read() == "s1\tcorrect\ns2\t1\t1\tR\ns2\t3\t4\tS\n"
    assert read_predictions(out, is_lgn=True) == preds


@pytest.mark.parametrize(
    "line, key",
    [
        ("s1\t1\t2", "bad_columns"),
        ("s1\tx\t2\tR", "non_numeric"),
        ("s1\t1\t2\tQ", "unknown_type"),
        ("s1\t3\t2\tR", "bad_span"),
    ],
)
def test_prediction_file_errors(tmp_path, line, key):
    with pytest.raises(aw.ReaderError) as err:
        read_predictions(_write(tmp_path / "p.tsv", line + "\n"))
    assert err.value.msg == key


def test_dependency_reader(tmp_path, synthetic):
    filename = str(tmp_path / "corpus.dep")
    write_dependencies([synthetic.parses[s.id] for s in synthetic.corpus], filename)
    parses = read_parses(filename, synthetic.corpus)
    assert list(parses) == synthetic.corpus.ids()
    assert all(parses[sid].words == synthetic.parses[sid].words for sid in parses)

    with pytest.raises(aw.ReaderError) as err:
        read_parses(filename, synthetic.corpus.subset(synthetic.corpus.ids()[:3]))
    assert err.value.msg == "count_mismatch"


def test_dependency_reader_text_mismatch(tmp_path, tiny_corpus):
    filename = _write(tmp_path / "p.dep", "1\t对我\t0\tHED\n\n1\t我们\t0\tHED\n\n1\t他\t0\tHED\n")
    with pytest.raises(aw.ReaderError) as err:
        read_parses(filename, tiny_corpus)
    assert err.value.msg == "text_mismatch"


def test_lexicon_reader(tmp_path):
    lexicon = read_lexicon(_write(tmp_path / "lex.txt", "北京\n\n离开\n北京\n"))
    assert len(lexicon) == 2
    assert "离开" in lexicon


def test_model_manifest(tmp_path):
    write_predictions(PredictionSet("a", {"s1": {(1, 1, "R")}}), str(tmp_path / "a.tsv"))
    write_predictions(PredictionSet("c", {"s1": set()}), str(tmp_path / "c.tsv"))
    manifest = str(tmp_path / "models.tsv")
    write_manifest([("a.tsv", False), ("c.tsv", True)], manifest)
    models = read_models(manifest)
    assert [m.model_id for m in models] == ["a", "c"]
    assert [m.is_lgn for m in models] == [False, True]

    bad = _write(tmp_path / "bad.tsv", "a.tsv\tyes\n")
    with pytest.raises(aw.ReaderError):
        read_models(bad)
