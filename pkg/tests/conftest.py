import pytest
from hypothesis import HealthCheck, settings

from tabled.harness import default_corpus_dir, load_corpus, load_tables

settings.register_profile(
    "tabled", deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large]
)
settings.load_profile("tabled")


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


@pytest.fixture(scope="session")
def corpus_dir():
    return default_corpus_dir()


@pytest.fixture(scope="session")
def tables(corpus):
    loaded, broken = load_tables(corpus)
    assert not broken
    return loaded

