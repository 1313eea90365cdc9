import pytest
from hypothesis import given
from hypothesis import strategies as st

import graminspect._auxiliary.warnings as aw
from graminspect.main import LABELS, Corpus, ErrorSpan, ErrorType, PredictionSet, Sentence, TagSequence
from graminspect.main.Corpus import bio_to_spans, encodable_spans, spans_to_bio


@st.composite
def disjoint_spans(draw, max_len=30):
    """Non-overlapping typed spans together with a sentence length that holds them."""
    n = draw(st.integers(1, max_len))
    spans, p = [], 1
    while p <= n:
        gap = draw(st.integers(0, 3))
        start = p + gap
        if start > n or not draw(st.booleans()):
            break
        end = draw(st.integers(start, min(n, start + 4)))
        spans.append(ErrorSpan(start, end, draw(st.sampled_from("RMSW"))))
        p = end + 1
    return frozenset(spans), n


def test_label_order():
    assert LABELS == ("O", "B-R", "I-R", "B-M", "I-M", "B-S", "I-S", "B-W", "I-W")
    assert ErrorType.R < ErrorType.M < ErrorType.S < ErrorType.W


def test_error_span_validation():
    span = ErrorSpan(3, 4, "M")
    assert span.type is ErrorType.M
    assert span.width == 2
    assert span.astuple() == (3, 4, "M")
    for start, end in [(0, 1), (4, 3), (1.5, 2)]:
        with pytest.raises(aw.CorpusError) as err:
            ErrorSpan(start, end, "R")
        assert err.value.msg == "bad_span"
    with pytest.raises(aw.CorpusError):
        ErrorSpan(1, 1, "X")


def test_spans_to_bio_example():
    tags = spans_to_bio({ErrorSpan(3, 4, "M")}, 6)
    assert str(tags) == "O O B-M I-M O O"
    assert list(tags.indices()) == [0, 0, 3, 4, 0, 0]


def test_spans_to_bio_rejects_overlap():
    with pytest.raises(aw.CorpusError) as err:
        spans_to_bio({ErrorSpan(1, 3, "R"), ErrorSpan(3, 4, "S")}, 5)
    assert err.value.msg == "bio_overlap"
    with pytest.raises(aw.CorpusError) as err:
        spans_to_bio({ErrorSpan(4, 6, "R")}, 5)
    assert err.value.msg == "span_out_of_range"


@given(disjoint_spans())
def test_bio_round_trip(case):
    spans, n = case
    tags = spans_to_bio(spans, n)
    assert len(tags) == n
    assert tags.is_well_formed()
    assert bio_to_spans(tags) == spans


@given(st.lists(st.sampled_from(LABELS), min_size=1, max_size=25))
def test_bio_decoder_is_total(labels):
    spans = bio_to_spans(labels)
    ordered = sorted(spans, key=lambda s: s.start)
    for first, second in zip(ordered, ordered[1:]):
        assert first.end < second.start
    for span in spans:
        assert span.end <= len(labels)
    # decoding the canonical re-encoding is stable
    assert bio_to_spans(spans_to_bio(spans, len(labels))) == spans


def test_orphan_inside_opens_a_span():
    assert bio_to_spans(["O", "I-S", "I-S", "O"]) == {ErrorSpan(2, 3, "S")}
    assert bio_to_spans(["B-R", "I-M", "I-M"]) == {ErrorSpan(1, 1, "R"), ErrorSpan(2, 3, "M")}
    assert not TagSequence(("O", "I-S")).is_well_formed()


def test_tag_sequence_rejects_unknown_labels():
    with pytest.raises(aw.CorpusError):
        TagSequence(("O", "B-X"))
    with pytest.raises(aw.CorpusError):
        TagSequence.from_indices([0, 9])


def test_sentence_validation():
    with pytest.raises(aw.CorpusError) as err:
        Sentence("e", "", set())
    assert err.value.msg == "empty_sentence"
    with pytest.raises(aw.CorpusError) as err:
        Sentence("o", "abcdef", {(1, 3, "S"), (2, 4, "S")})
    assert err.value.msg == "type_overlap"
    # overlap across types is allowed in the gold data
    sentence = Sentence("x", "abcdef", {(1, 3, "S"), (2, 4, "W")})
    assert len(sentence.gold) == 2


def test_encodable_spans_keeps_first_in_order():
    spans = {ErrorSpan(2, 4, "W"), ErrorSpan(2, 2, "S"), ErrorSpan(6, 6, "R")}
    kept = encodable_spans(spans, sid="x")
    assert kept == {ErrorSpan(2, 2, "S"), ErrorSpan(6, 6, "R")}
    sentence = Sentence("x", "abcdef", spans)
    assert str(sentence.tags()) == "O B-S O O O B-R"


def test_corpus_lookup(tiny_corpus):
    assert tiny_corpus.ids() == ["s1", "s2", "s3"]
    assert tiny_corpus[1].id == "s2"
    assert tiny_corpus["s3"].n == 10
    assert "s2" in tiny_corpus
    with pytest.raises(aw.CorpusError):
        tiny_corpus.get("nope")
    with pytest.raises(aw.CorpusError) as err:
        tiny_corpus.add(Sentence("s1", "x"))
    assert err.value.msg == "duplicate_id"


def test_corpus_statistics(tiny_corpus):
    stats = tiny_corpus.statistics()
    row = stats.iloc[0]
    assert list(stats.columns) == ["Sentences", "Correct", "Error", "R", "M", "S", "W"]
    assert (row["Sentences"], row["Correct"], row["Error"]) == (3, 1, 3)
    assert (row["R"], row["M"], row["S"], row["W"]) == (1, 1, 1, 0)


def test_corpus_split_is_seeded(synthetic):
    corpus = synthetic.corpus
    first, second = corpus.split(0.75, seed=9)
    again, _ = corpus.split(0.75, seed=9)
    assert first.ids() == again.ids()
    assert len(first) == 18 and len(second) == 6
    assert set(first.ids()).isdisjoint(second.ids())
    order = corpus.ids()
    assert first.ids() == sorted(first.ids(), key=order.index)
    with pytest.raises(aw.CorpusError):
        corpus.split(1.0)


def test_prediction_set_canonical_lines():
    preds = PredictionSet("m", {"b": {(3, 4, "S"), (1, 1, "R")}, "a": set()})
    assert preds.canonical_lines() == ["a\tcorrect", "b\t1\t1\tR", "b\t3\t4\tS"]
    assert preds.get("zzz") == frozenset()
    assert preds.n_spans() == 2
    assert preds == PredictionSet("other", {"a": [], "b": [(1, 1, "R"), (3, 4, "S")]})
    assert preds != PredictionSet("m", {"a": [], "b": [(1, 1, "R"), (3, 4, "S")]}, is_lgn=True)


def test_gold_predictions_list_every_sentence(tiny_corpus):
    gold = tiny_corpus.gold_predictions()
    assert gold.ids() == ["s1", "s2", "s3"]
    assert gold.get("s2") == frozenset()
    assert isinstance(tiny_corpus, Corpus)
