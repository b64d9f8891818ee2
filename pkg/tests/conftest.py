import pytest

from storyvoice import DATA_DIR
from storyvoice.lexicon import default_lexicon
from storyvoice.persona import get_model, model_names
from storyvoice.story import load_story
from storyvoice.translator import translate_story

STORIES = DATA_DIR / "stories"
GOLDEN = DATA_DIR / "golden"
CORPORA = ("fox_crow_monologic", "fox_crow_dialogic", "party_member")


@pytest.fixture(scope="session")
def lexicon():
    return default_lexicon()


@pytest.fixture(scope="session")
def graphs(lexicon):
    return {name: load_story(STORIES / f"{name}.story", lexicon) for name in CORPORA}


@pytest.fixture(scope="session")
def plans(graphs, lexicon):
    return {name: translate_story(g, lexicon) for name, g in graphs.items()}


@pytest.fixture(scope="session")
def models():
    return {name: get_model(name) for name in model_names()}
