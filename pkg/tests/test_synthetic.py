import pytest

from graminspect.Graphs import dep_to_char_adjacency
from graminspect.main.Synthetic import CONFUSABLES, PARTICLES, TAXONOMY_EXAMPLES, Generator, generate, vocabulary


def _span_text(sentence, span):
    return sentence.text[span.start - 1 : span.end]


def test_generation_depends_only_on_the_seed():
    first, second = generate(30, seed=8), generate(30, seed=8)
    assert [(s.id, s.text, s.gold) for s in first.corpus] == [(s.id, s.text, s.gold) for s in second.corpus]
    other = generate(30, seed=9)
    assert [s.text for s in other.corpus] != [s.text for s in first.corpus]


def test_ids_and_parses():
    data = generate(12, seed=1, prefix="dev")
    assert data.corpus.ids()[0] == "dev-00001"
    assert data.corpus.id() == "dev"
    for sentence in data.corpus:
        parse = data.parses[sentence.id]
        assert parse.text == sentence.text
        graph = dep_to_char_adjacency(parse, sentence)
        assert graph.n == sentence.n


def test_error_rate_bounds():
    assert all(not s.gold for s in generate(20, seed=2, error_rate=0.0).corpus)
    assert all(len(s.gold) == 1 for s in generate(20, seed=2, error_rate=1.0).corpus)


@pytest.mark.parametrize("type", ["R", "M", "S", "W"])
def test_error_rules(type):
    corpus = Generator(seed=4, error_rate=1.0, types=(type,)).generate(25).corpus
    for sentence in corpus:
        (span,) = sentence.gold
        text = _span_text(sentence, span)
        # substitutions fall back to redundancy when no confusable word is present
        if span.type.name == "S":
            assert text in CONFUSABLES.values()
        elif span.type.name == "R":
            assert text in PARTICLES
        elif span.type.name == "M":
            assert span.width == 1
        else:
            assert span.width >= 2
        assert span.type.name in (type, "R")
        assert span.end < sentence.n or span.type.name == "M"


def test_lexicon_covers_multi_character_words():
    data = generate(5, seed=3)
    words = set(data.lexicon.words())
    assert words == {w for w in vocabulary() if len(w) > 1}
    assert "博物馆" in data.lexicon


def test_taxonomy_examples():
    spans = {s.id: _span_text(s, next(iter(s.gold))) for s in TAXONOMY_EXAMPLES}
    assert spans["tax-R"] == "的"
    assert spans["tax-S"] == "多"
    assert spans["tax-W"] == "真相尽可能多"
