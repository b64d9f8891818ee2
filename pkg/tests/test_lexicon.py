import pytest
from hypothesis import given
from hypothesis import strategies as st

from storyvoice.lexicon import (
    Lexicon,
    LexiconError,
    UnknownFrameError,
    load_frames,
    regular_past,
    regular_plural,
    regular_third_singular,
)
from storyvoice.story import Proposition, walk


def test_say_frame(lexicon):
    frame = lexicon.lookup_frame("say")
    assert frame.relation("agent") == "subject"
    assert frame.complement_type == "sentential"
    assert frame.communication_or_cognition and not frame.cognition


def test_sit_frame(lexicon):
    frame = lexicon.lookup_frame("sit")
    assert frame.roles == (("agent", "subject"),)
    assert frame.complement_type == "none"
    assert not frame.communication_or_cognition


def test_unknown_frame(lexicon):
    with pytest.raises(UnknownFrameError, match="flurble"):
        lexicon.lookup_frame("flurble")


@pytest.mark.parametrize("frame_id", ["say", "think", "aver", "allege", "demonstrate"])
def test_communication_class(lexicon, frame_id):
    assert lexicon.lookup_frame(frame_id).communication_or_cognition


def test_think_is_cognition(lexicon):
    assert lexicon.lookup_frame("think").cognition


def test_be_frame_maps_attribute(lexicon):
    assert lexicon.lookup_frame("be").relation("attribute") == "attribute"


def test_lookup_is_stable(lexicon):
    assert lexicon.lookup_frame("say") is lexicon.lookup_frame("say")


@pytest.mark.parametrize(
    "lexeme, tense, person, number, expected",
    [
        ("sit", "past", "3", "sg", "sat"),
        ("snatch", "past", "3", "sg", "snatched"),
        ("walk", "present", "3", "sg", "walks"),
        ("walk", "present", "1", "sg", "walk"),
        ("be", "present", "1", "sg", "am"),
        ("be", "present", "2", "sg", "are"),
        ("be", "present", "3", "sg", "is"),
        ("be", "past", "3", "sg", "was"),
        ("be", "past", "2", "sg", "were"),
        ("be", "past", "3", "pl", "were"),
        ("aver", "past", "3", "sg", "averred"),
        ("need", "present", "2", "sg", "need"),
        ("fight", "future", "1", "sg", "will fight"),
        ("caw", "past", "3", "sg", "cawed"),
        ("try", "past", "3", "sg", "tried"),
        ("flatter", "present", "3", "sg", "flatters"),
    ],
)
def test_inflect(lexicon, lexeme, tense, person, number, expected):
    assert lexicon.inflect(lexeme, tense, person, number) == expected


@pytest.mark.parametrize("word, past, third, plural", [
    ("stop", "stopped", "stops", "stops"),
    ("carry", "carried", "carries", "carries"),
    ("watch", "watched", "watches", "watches"),
    ("bake", "baked", "bakes", "bakes"),
    ("play", "played", "plays", "plays"),
])
def test_regular_rules(word, past, third, plural):
    assert regular_past(word) == past
    assert regular_third_singular(word) == third
    assert regular_plural(word) == plural


def test_irregular_nouns(lexicon):
    assert lexicon.plural("bird") == "birds"
    assert lexicon.plural("wolf") == "wolves"
    assert lexicon.plural("visual aspect") == "visual aspects"


def test_irregular_flag(lexicon):
    assert lexicon.morph("sit").irregular
    assert lexicon.morph("bird") is None or not lexicon.morph("bird").irregular


@given(st.from_regex(r"[a-z]{1,10}", fullmatch=True), st.sampled_from([None, "base", "inf"]))
def test_base_request_is_identity(word, tense):
    lexicon = Lexicon([], [])
    assert lexicon.inflect(word, tense) == word


def test_corpus_closure(graphs, lexicon):
    for graph in graphs.values():
        for _, action in graph.actions():
            for node in walk(action):
                if isinstance(node, Proposition):
                    frame = lexicon.lookup_frame(node.frame_id)
                    for tense in ("past", "present", "future"):
                        assert lexicon.inflect(frame.lexeme, tense)


def test_header_required(tmp_path):
    path = tmp_path / "frames.tsv"
    path.write_text("id\tlexeme\nsay\tsay\n", encoding="utf-8")
    with pytest.raises(LexiconError, match="header"):
        load_frames(path)


def test_bad_role_mapping(tmp_path):
    path = tmp_path / "frames.tsv"
    path.write_text(
        "frame_id\tlexeme\troles\tcomplement\tflags\nx\tx\tagent:nowhere\tnone\t-\n",
        encoding="utf-8",
    )
    with pytest.raises(LexiconError, match="bad role mapping"):
        load_frames(path)


def test_load_from_directory(tmp_path, lexicon):
    (tmp_path / "frames.tsv").write_text(
        "frame_id\tlexeme\troles\tcomplement\tflags\n"
        "zap\tzap\tagent:subject,theme:object\tnominal\t-\n",
        encoding="utf-8",
    )
    (tmp_path / "morph.tsv").write_text("lexeme\tpast\tthird_singular\tplural\n", encoding="utf-8")
    custom = Lexicon.load(tmp_path)
    assert custom.frame_ids == ("zap",)
    assert custom.inflect("zap", "past") == "zapped"
