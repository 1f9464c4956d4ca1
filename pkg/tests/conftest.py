import pytest

from nlgcrowd.generate import MrSetRequest, generate_balanced_set
from nlgcrowd.render import load_render_config
from nlgcrowd.schema import load_schema
from nlgcrowd.similarity import SynonymLexicon
from nlgcrowd.validation import ValidationConfig


@pytest.fixture(scope="session")
def schema():
    return load_schema()


@pytest.fixture(scope="session")
def vconfig():
    return ValidationConfig()


@pytest.fixture(scope="session")
def lexicon():
    return SynonymLexicon.load()


@pytest.fixture(scope="session")
def render_config(schema):
    return load_render_config(schema)


@pytest.fixture(scope="session")
def mrs75(schema):
    request = MrSetRequest(counts={3: 25, 5: 25, 8: 25}, seed=42, schema=schema)
    return generate_balanced_set(request)
