import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from storyvoice.persona import (
    ALLOWED_SITES,
    PARAMETERS,
    SITES,
    ModelError,
    PersonalityModel,
    UnknownModelError,
    apply_model,
    choose_attribution,
    echo_tag,
    get_model,
    parse_model,
    strip_markers,
    stutter,
    unstutter,
)
from storyvoice.realizer import realize
from storyvoice.story import parse_story
from storyvoice.translator import translate_story

HEADER = """\
entity fox: fox, character, masculine, definite
entity crow: crow, character, feminine, definite
entity vine: vine, object, neuter, definite
entity trellis: trellis, object, neuter, definite
"""


def plans_of(*actions):
    g = parse_story(HEADER + "".join(f"timespan {i}:\n  {a}\n" for i, a in enumerate(actions, 1)))
    return translate_story(g)


def model(text):
    return parse_model("[model]\nname = test\n" + text)


def test_neutral_is_all_zero(models):
    assert models["neutral"].is_neutral
    assert set(models["neutral"].params.values()) == {0.0}


def test_shy_parameters(models):
    active = {p for p, v in models["shy"].params.items() if v > 0}
    assert active == {"softener_hedges", "stuttering", "filled_pauses"}


def test_laid_back_parameters(models):
    active = {p for p, v in models["laid_back"].params.items() if v > 0}
    assert active == {"emphasizer_hedges", "exclamation", "expletives", "tag_question"}


def test_bundled_models_present():
    for name in ("neutral", "shy", "laid_back", "openness", "marion", "vincent", "otter"):
        assert get_model(name).name == name


def test_unknown_model():
    with pytest.raises(UnknownModelError, match="unknown model"):
        get_model("unknown_model")


@pytest.mark.parametrize(
    "text, message",
    [
        ("[params]\nsarcasm = 1.0\n", "unknown parameter"),
        ("[params]\nexclamation = 1.5\n", "outside"),
        ("[params]\nexclamation = loud\n", "not a number"),
        ("[params]\nexpletives = 1.0\n", "no marker words"),
        ("[markers]\nexpletives.clause_final = damn\n", "cannot insert"),
        ("[markers]\nsarcasm.clause_initial = yeah right\n", "unknown parameter"),
    ],
)
def test_model_errors(text, message):
    with pytest.raises(ModelError, match=message):
        model(text)


def test_missing_name():
    with pytest.raises(ModelError, match="name"):
        parse_model("[params]\n")


def test_softener_preposed():
    m = model("[params]\nsoftener_hedges = 1.0\n[markers]\n"
              "softener_hedges.clause_initial = it seems to me that\n")
    (plan,) = plans_of("be(pro(fox), adj(hungry))")
    assert realize(apply_model(plan, m)) == "It seems to me that he was hungry."


def test_expletive_before_adjective():
    m = model("[params]\nexpletives = 1.0\n[markers]\nexpletives.pre_adjective = damn\n")
    (plan,) = plans_of("be(fox, adj(hungry))")
    assert realize(apply_model(plan, m)) == "The fox was damn hungry."


def test_stutter_content_noun():
    m = model("[params]\nstuttering = 1.0\n")
    (plan,) = plans_of("hang(vine) [on: trellis]")
    styled = apply_model(plan, m)
    assert realize(styled) == "The vi-vine hung on the trellis."
    assert strip_markers(styled) == plan


def test_stutter_prefers_inserted_hedge():
    m = model("[params]\nsoftener_hedges = 1.0\nstuttering = 1.0\n[markers]\n"
              "softener_hedges.pre_adjective = somewhat\n")
    (plan,) = plans_of("be(fox, adj(beautiful))")
    assert realize(apply_model(plan, m)) == "The fox was so-somewhat beautiful."


@pytest.mark.parametrize("word, expected", [("trellis", "tr-trellis"), ("somewhat", "so-somewhat"), ("ox", "ox")])
def test_stutter_examples(word, expected):
    assert stutter(word) == expected
    assert unstutter(expected) == word


@given(st.text(alphabet="abcdefghijklmnopqrstuvwxyz", min_size=3, max_size=15))
def test_stutter_suffix_law(word):
    out = stutter(word)
    assert out.endswith(word) and out.count("-") == 1
    assert unstutter(out) == word


@given(st.text(alphabet="abcdefghijklmnopqrstuvwxyz", max_size=2))
def test_short_words_unchanged(word):
    assert stutter(word) == word


def test_neutral_identity_all_seeds(plans, models):
    for corpus in plans.values():
        for plan in corpus:
            for seed in range(20):
                assert apply_model(plan, models["neutral"], seed) == plan


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32), name=st.sampled_from(["shy", "laid_back", "openness", "marion", "otter"]))
def test_strip_inverts_apply(plans, models, seed, name):
    for plan in plans["fox_crow_dialogic"] + plans["party_member"]:
        assert strip_markers(apply_model(plan, models[name], seed)) == plan


def test_strip_without_markers_is_identity(plans):
    for plan in plans["fox_crow_monologic"]:
        assert strip_markers(plan) == plan


@given(seed=st.integers(0, 10**6))
def test_deterministic(plans, models, seed):
    plan = plans["fox_crow_dialogic"][2]
    assert apply_model(plan, models["shy"], seed) == apply_model(plan, models["shy"], seed)


def _markers(plan):
    return [n for n in plan.tree.walk() if n.marker is not None]


def test_zero_activation_inserts_nothing(plans):
    m = model("[params]\nemphasizer_hedges = 0.0\n[markers]\nemphasizer_hedges.pre_verb = really\n")
    for plan in plans["fox_crow_dialogic"]:
        assert _markers(apply_model(plan, m, 1)) == []


def test_full_activation_fills_every_site(plans):
    m = model("[params]\nemphasizer_hedges = 1.0\n[markers]\n"
              "emphasizer_hedges.pre_verb = really\nemphasizer_hedges.pre_adjective = very\n")
    for plan in plans["fox_crow_dialogic"]:
        styled = apply_model(plan, m, 5)
        adjectives = sum(1 for n in plan.tree.walk() if n.cls == "adjective")
        assert sum(1 for n in _markers(styled) if n.site == "pre_adjective") == adjectives
        assert sum(1 for n in _markers(styled) if n.site == "pre_verb") >= 1


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6), act=st.floats(0, 1))
def test_parameter_streams_are_independent(plans, seed, act):
    base = "[markers]\nemphasizer_hedges.pre_verb = really\nexpletives.pre_adjective = damn\n"
    one = model(f"[params]\nemphasizer_hedges = 0.5\nexpletives = {act}\n" + base)
    two = model("[params]\nemphasizer_hedges = 0.5\n" + base)
    for plan in plans["fox_crow_dialogic"]:
        hedges = [
            [(n.lexeme, n.site) for n in _markers(apply_model(plan, m, seed)) if n.marker == "emphasizer_hedges"]
            for m in (one, two)
        ]
        assert hedges[0] == hedges[1]


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_sites_from_inventory(plans, models, seed):
    for name, m in models.items():
        for plan in plans["fox_crow_dialogic"]:
            for n in _markers(apply_model(plan, m, seed)):
                assert n.site in SITES
                assert n.marker in PARAMETERS
                if ALLOWED_SITES[n.marker]:
                    assert n.site in ALLOWED_SITES[n.marker]


def test_exclamation_beats_tag_at_equal_activation(plans):
    m = model("[params]\ntag_question = 1.0\nexclamation = 1.0\n[markers]\ntag_question.clause_final = right\n")
    for plan in plans["fox_crow_dialogic"]:
        kinds = [n.marker for n in _markers(apply_model(plan, m, 0))]
        assert "exclamation" in kinds and "tag_question" not in kinds


def test_tag_beats_exclamation_when_stronger(plans):
    m = model("[params]\ntag_question = 1.0\nexclamation = 0.9\n[markers]\ntag_question.clause_final = right\n")
    for plan in plans["fox_crow_dialogic"]:
        kinds = [n.marker for n in _markers(apply_model(plan, m, 0))]
        assert "tag_question" in kinds and "exclamation" not in kinds


def test_echo_tag(plans):
    (plan,) = plans["party_member"]
    assert echo_tag(plan.tree) == "won't I"
    (able,) = plans_of("be(fox, adj(hungry))")
    assert echo_tag(able.tree) == "wasn't it"


def test_attribution_choice_uses_communication_frames(plans):
    m = model("[attribution_verbs]\nallege = 1\nthink = 5\n")
    for plan in plans["fox_crow_dialogic"]:
        chosen = choose_attribution(plan, m, 0)
        if plan.mode == "direct_speech":
            assert chosen.matrix.lexeme == "allege"
        else:
            assert chosen == plan


def test_attribution_is_seeded(plans, models):
    speech = [p for p in plans["fox_crow_dialogic"] if p.mode == "direct_speech"]
    verbs = {choose_attribution(p, models["neutral"], s).matrix.lexeme for p in speech for s in range(10)}
    assert verbs == {"say", "allege", "aver"}


def test_model_words_default_site():
    m = model("[params]\ntag_question = 1.0\n[markers]\ntag_question = okay\n")
    assert m.words("tag_question", "clause_final") == ("okay",)


def test_model_is_value_object():
    assert PersonalityModel("x") == PersonalityModel("x", {"exclamation": 0})
