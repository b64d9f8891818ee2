"""Personality models and pragmatic-marker insertion.

A model assigns each of nine marker parameters an activation in [0, 1].
:func:`apply_model` walks a plan's tree and, at every eligible site, inserts
a marker with probability equal to the activation. Parameters are applied
in this order, which also fixes the surface order of markers sharing a site:

1. ``acknowledgment``     utterance-initial ("Oh God", "let's see...")
2. ``filled_pauses``      utterance-initial, after an acknowledgment
3. ``softener_hedges``    clause-initial / pre-verb / pre-adjective
4. ``emphasizer_hedges``  clause-initial / pre-verb / pre-adjective
5. ``expletives``         pre-adjective
6. ``stuttering``         the first pre-adjective hedge, else the first
                          adjective, else the first third-person noun
7. ``in_group_marker``    utterance-final
8. ``tag_question``       utterance-final
9. ``exclamation``        terminal punctuation

Clause sites are the root clause followed by every finite clause governed
by a conjunction ("because", "if"), in tree order; adjective sites are all
adjectives in tree order. Tag question and exclamation exclude each other;
when both fire the exclamation wins unless the tag's activation is higher.

Each parameter draws from its own stream seeded by the run seed, the plan's
source span and the parameter id, so results do not depend on which other
parameters are active.

Model files are INI documents::

    [model]
    name = shy

    [params]
    softener_hedges = 1.0

    [markers]
    softener_hedges.clause_initial = I think that | it seems that
    softener_hedges.pre_adjective = somewhat | quite

    [attribution_verbs]
    say = 1
"""

from __future__ import annotations

import configparser
import random
from dataclasses import dataclass, field, replace
from functools import lru_cache
from pathlib import Path

from .lexicon import Lexicon, default_lexicon
from .translator import SyntaxNode, UtterancePlan

PARAMETERS = (
    "softener_hedges",
    "emphasizer_hedges",
    "stuttering",
    "filled_pauses",
    "exclamation",
    "expletives",
    "tag_question",
    "in_group_marker",
    "acknowledgment",
)
SITES = ("clause_initial", "pre_verb", "pre_adjective", "clause_final")
ALLOWED_SITES = {
    "softener_hedges": ("clause_initial", "pre_verb", "pre_adjective"),
    "emphasizer_hedges": ("clause_initial", "pre_verb", "pre_adjective"),
    "filled_pauses": ("clause_initial",),
    "acknowledgment": ("clause_initial",),
    "expletives": ("pre_adjective",),
    "in_group_marker": ("clause_final",),
    "tag_question": ("clause_final",),
    "stuttering": (),
    "exclamation": (),
}
ECHO = "ECHO"  # tag-question entry that echoes the clause's auxiliary and subject
HEDGES = ("softener_hedges", "emphasizer_hedges")

MODELS_DIR = Path(__file__).parent / "data" / "models"


class ModelError(ValueError):
    pass


class UnknownModelError(ModelError):
    pass


@dataclass(frozen=True)
class PersonalityModel:
    name: str
    params: dict = field(default_factory=dict)
    markers: dict = field(default_factory=dict)  # param -> {site: tuple of words}
    attribution_verbs: tuple[tuple[str, float], ...] = ()

    def __post_init__(self):
        params = {p: 0.0 for p in PARAMETERS}
        for key, value in self.params.items():
            if key not in PARAMETERS:
                raise ModelError(f"model {self.name!r}: unknown parameter id {key!r}")
            value = float(value)
            if not 0.0 <= value <= 1.0:
                raise ModelError(f"model {self.name!r}: activation {key}={value} outside [0, 1]")
            params[key] = value
        object.__setattr__(self, "params", params)
        for key, sites in self.markers.items():
            if key not in PARAMETERS:
                raise ModelError(f"model {self.name!r}: unknown parameter id {key!r}")
            for site in sites:
                if site not in ALLOWED_SITES[key]:
                    raise ModelError(f"model {self.name!r}: {key} cannot insert at {site!r}")
        for key in PARAMETERS:
            if params[key] > 0 and ALLOWED_SITES[key] and not any(self.words(key, s) for s in ALLOWED_SITES[key]):
                raise ModelError(f"model {self.name!r}: {key} is active but has no marker words")
        for verb, weight in self.attribution_verbs:
            if weight < 0:
                raise ModelError(f"model {self.name!r}: negative weight for {verb!r}")

    def activation(self, param: str) -> float:
        return self.params[param]

    def words(self, param: str, site: str) -> tuple[str, ...]:
        return tuple(self.markers.get(param, {}).get(site, ()))

    @property
    def is_neutral(self) -> bool:
        return not any(self.params.values())


def parse_model(text: str, source: str = "<model>") -> PersonalityModel:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ModelError(f"{source}: {exc}") from None
    if not cp.has_option("model", "name"):
        raise ModelError(f"{source}: [model] section needs a name")
    params = {}
    if cp.has_section("params"):
        for key, value in cp.items("params"):
            try:
                params[key] = float(value)
            except ValueError:
                raise ModelError(f"{source}: activation {key}={value!r} is not a number") from None
    markers: dict[str, dict[str, tuple[str, ...]]] = {}
    if cp.has_section("markers"):
        for key, value in cp.items("markers"):
            param, _, site = key.partition(".")
            if param not in ALLOWED_SITES:
                raise ModelError(f"{source}: unknown parameter id {param!r}")
            site = site or (ALLOWED_SITES[param][0] if ALLOWED_SITES[param] else "")
            words = tuple(w.strip() for w in value.split("|") if w.strip())
            markers.setdefault(param, {})[site] = words
    verbs = []
    if cp.has_section("attribution_verbs"):
        for verb, weight in cp.items("attribution_verbs"):
            verbs.append((verb, float(weight)))
    return PersonalityModel(cp.get("model", "name"), params, markers, tuple(verbs))


def load_model(path) -> PersonalityModel:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read(), str(path))


def model_names(models_dir=None) -> list[str]:
    directory = Path(models_dir) if models_dir else MODELS_DIR
    return sorted(p.stem for p in directory.glob("*.model"))


@lru_cache(maxsize=None)
def _cached(path: str) -> PersonalityModel:
    return load_model(path)


def get_model(name: str, models_dir=None) -> PersonalityModel:
    directory = Path(models_dir) if models_dir else MODELS_DIR
    path = directory / f"{name}.model"
    if not path.is_file():
        raise UnknownModelError(f"unknown model {name!r} (looked in {directory})")
    return _cached(str(path.resolve()))


# -- stuttering ------------------------------------------------------------------


def stutter(word: str) -> str:
    """Duplicate the first two characters: ``trellis`` -> ``tr-trellis``."""
    if len(word) < 3:
        return word
    return word[:2] + "-" + word


def unstutter(word: str) -> str:
    prefix, sep, rest = word.partition("-")
    if sep and len(prefix) == 2 and rest[:2] == prefix and len(rest) >= 3:
        return rest
    return word


# -- echo tags ---------------------------------------------------------------------

_NEGATED_AUX = {
    "will": "won't", "is": "isn't", "are": "aren't", "was": "wasn't", "were": "weren't",
    "do": "don't", "does": "doesn't", "did": "didn't",
}
_SUBJECT_PRONOUNS = {"he": "he", "she": "she", "it": "it", "they": "they"}


def echo_tag(clause: SyntaxNode) -> str:
    """Question tag echoing a clause: ``I will fight`` -> ``won't I``."""
    subject = next((c for c in clause.content_children() if c.rel == "subject"), None)
    person = subject.get("person", "3") if subject else "3"
    number = subject.get("number", "sg") if subject else "sg"
    if person == "1":
        pronoun = "I" if number == "sg" else "we"
    elif person == "2":
        pronoun = "you"
    elif subject is not None and subject.lexeme in _SUBJECT_PRONOUNS:
        pronoun = subject.lexeme
    else:
        pronoun = "they" if number == "pl" else "it"
    tense = clause.get("tense", "present")
    copular = clause.lexeme == "be" or clause.get("modal") == "able_to"
    if tense == "future":
        aux = "will"
    elif copular:
        if tense == "past":
            aux = "was" if number == "sg" and person in ("1", "3") else "were"
        else:
            aux = {"1": "am", "3": "is"}.get(person, "are") if number == "sg" else "are"
    elif tense == "past":
        aux = "did"
    else:
        aux = "does" if person == "3" and number == "sg" else "do"
    if clause.get("polarity") == "neg":
        return f"{aux} {pronoun}"
    if aux == "am":
        return f"aren't {pronoun}"
    return f"{_NEGATED_AUX[aux]} {pronoun}"


# -- marker insertion ------------------------------------------------------------------


class _Work:
    """Mutable mirror of a SyntaxNode while markers are inserted."""

    def __init__(self, node: SyntaxNode, parent: "_Work | None" = None):
        self.node = node
        self.parent = parent
        self.kids = [_Work(c, self) for c in node.children]
        self.added: list[SyntaxNode] = []
        self.lexeme = node.lexeme
        self.stuttered = node.stuttered

    def walk(self):
        yield self
        for kid in self.kids:
            yield from kid.walk()

    def freeze(self) -> SyntaxNode:
        return replace(
            self.node,
            lexeme=self.lexeme,
            stuttered=self.stuttered,
            children=tuple(k.freeze() for k in self.kids) + tuple(self.added),
        )


def _marker(param: str, word: str, site: str) -> SyntaxNode:
    cls = "adverb" if param in HEDGES and site != "clause_initial" else "functional"
    return SyntaxNode(word, cls, {"rel": "adjunct"}, (), None, marker=param, site=site)


def _is_clause(work: _Work) -> bool:
    node = work.node
    if node.cls != "verb":
        return False
    if work.parent is None:
        return True
    return work.parent.node.cls == "functional" and node.get("tense") in ("past", "present", "future")


def _stream(seed, span, param) -> random.Random:
    return random.Random(f"{seed}:{span[0]}.{span[1]}:{param}")


def apply_model(plan: UtterancePlan, model: PersonalityModel, seed: int = 0) -> UtterancePlan:
    """Insert the model's pragmatic markers into ``plan.tree``.

    Deterministic in (plan, model, seed). Content nodes are never removed or
    reordered; markers are appended as flagged children of their site's
    governor.
    """
    root = _Work(plan.tree)
    nodes = list(root.walk())
    clauses = [w for w in nodes if _is_clause(w)]
    adjectives = [w for w in nodes if w.node.cls == "adjective"]
    span = plan.source_span
    streams = {p: _stream(seed, span, p) for p in PARAMETERS}

    def insert(param, targets, site):
        words = model.words(param, site)
        act = model.activation(param)
        if not words or act <= 0:
            return
        rng = streams[param]
        for target in targets:
            if rng.random() < act:
                target.added.append(_marker(param, rng.choice(words), site))

    insert("acknowledgment", [root], "clause_initial")
    insert("filled_pauses", [root], "clause_initial")
    for param in HEDGES:
        insert(param, clauses, "clause_initial")
        insert(param, clauses, "pre_verb")
        insert(param, adjectives, "pre_adjective")
    insert("expletives", adjectives, "pre_adjective")

    act = model.activation("stuttering")
    if act > 0 and streams["stuttering"].random() < act:
        _stutter_first(adjectives, nodes)

    insert("in_group_marker", [root], "clause_final")

    tag_act = model.activation("tag_question")
    tag_words = model.words("tag_question", "clause_final")
    if tag_act > 0 and tag_words:
        rng = streams["tag_question"]
        if rng.random() < tag_act:
            word = rng.choice(tag_words)
            if word == ECHO:
                word = echo_tag(plan.tree)
            root.added.append(_marker("tag_question", word, "clause_final"))

    excl_act = model.activation("exclamation")
    if excl_act > 0 and streams["exclamation"].random() < excl_act:
        tags = [m for m in root.added if m.marker == "tag_question"]
        if not tags or excl_act >= tag_act:
            root.added = [m for m in root.added if m.marker != "tag_question"]
            root.added.append(_marker("exclamation", "!", "clause_final"))

    return replace(plan, tree=root.freeze())


def _stutter_first(adjectives: list[_Work], nodes: list[_Work]) -> None:
    for adj in adjectives:
        for i, m in enumerate(adj.added):
            if m.marker in HEDGES and m.site == "pre_adjective":
                if len(m.lexeme) >= 3:
                    adj.added[i] = replace(m, lexeme=stutter(m.lexeme), stuttered=True)
                return
    targets = adjectives or [
        w for w in nodes
        if w.node.cls == "noun" and w.node.get("person") == "3"
        and w.node.lexeme not in _SUBJECT_PRONOUNS
    ]
    if targets and len(targets[0].lexeme) >= 3:
        targets[0].lexeme = stutter(targets[0].lexeme)
        targets[0].stuttered = True


def _strip(node: SyntaxNode) -> SyntaxNode:
    return replace(
        node,
        lexeme=unstutter(node.lexeme) if node.stuttered else node.lexeme,
        stuttered=False,
        children=tuple(_strip(c) for c in node.children if c.marker is None),
    )


def strip_markers(plan: UtterancePlan) -> UtterancePlan:
    """Remove inserted markers and undo stuttering."""
    return replace(plan, tree=_strip(plan.tree))


def choose_attribution(
    plan: UtterancePlan, model: PersonalityModel, seed: int = 0, lexicon: Lexicon | None = None
) -> UtterancePlan:
    """Pick the speech verb of a direct-speech plan's attribution clause.

    Only communication frames listed in the model's attribution verbs are
    candidates; thoughts keep their cognition verb.
    """
    if plan.mode != "direct_speech" or not model.attribution_verbs:
        return plan
    lexicon = lexicon or default_lexicon()
    candidates = []
    for frame_id, weight in model.attribution_verbs:
        frame = lexicon.lookup_frame(frame_id)
        if "communication" in frame.flags and weight > 0:
            candidates.append((frame.lexeme, weight))
    if not candidates:
        return plan
    rng = _stream(seed, plan.source_span, "attribution")
    verb = rng.choices([v for v, _ in candidates], [w for _, w in candidates])[0]
    return replace(plan, matrix=replace(plan.matrix, lexeme=verb))
