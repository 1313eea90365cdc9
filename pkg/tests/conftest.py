import matplotlib

matplotlib.use("Agg")

import numpy as np
import pytest

from graminspect.Graphs import build_graphs
from graminspect.main import Corpus, Sentence
from graminspect.main.Synthetic import generate
from graminspect.Tagger import ModelConfig, TrainConfig


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run the desk-scale end-to-end tests")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: desk-scale tests that train real models")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def tiny_corpus():
    return Corpus(
        [
            Sentence("s1", "对我来说今年的我的暑假非常特别", {(8, 8, "R")}),
            Sentence("s2", "我们一起去看电影", set()),
            Sentence("s3", "他喜欢汉语我也很喜欢", {(3, 4, "S"), (6, 6, "M")}),
        ],
        id="tiny",
    )


@pytest.fixture(scope="session")
def synthetic():
    return generate(24, seed=5)


@pytest.fixture(scope="session")
def graphs_a(synthetic):
    return build_graphs(synthetic.corpus, "A", parses=synthetic.parses)


@pytest.fixture(scope="session")
def graphs_c(synthetic):
    return build_graphs(synthetic.corpus, "C", lexicon=synthetic.lexicon)


def small_model(variant, **overrides):
    values = dict(embedding_dim=6, gat_dims=(4, 3), gat_heads=(2, 2), lstm_hidden=3)
    if variant == "B":
        values["frozen_dim"] = 4
    values.update(overrides)
    return ModelConfig.from_profile("toy", variant, **values)


def quick_schedule(**overrides):
    values = dict(batch_size=4, lr=1e-2, epochs=2, dropout=0.0, seed=3)
    values.update(overrides)
    return TrainConfig(**values)
