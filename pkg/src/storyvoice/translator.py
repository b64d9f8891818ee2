"""Translate story propositions into lexico-syntactic trees.

Every action of the timeline becomes one :class:`UtterancePlan`. Plain
actions are narrated in the past tense. An action whose communication or
cognition verb carries ``directly`` is split into an attribution clause
(``the fox said``) and a quoted tree in which the speaker is first person,
the interlocutor second person, and finite verbs are present (or future for
intent embeddings).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterator

from .lexicon import RELATIONS, Lexicon, default_lexicon
from .story import (
    AdjectivePhrase,
    Entity,
    EntityRef,
    NounPhrase,
    Proposition,
    StoryGraph,
)

CLASSES = ("noun", "verb", "adverb", "adjective", "functional")
FEATURE_VALUES = {
    "tense": ("past", "present", "future", "inf"),
    "person": ("1", "2", "3"),
    "number": ("sg", "pl"),
    "article": ("def", "indef", "none", "every", "some"),
    "rel": RELATIONS,
    "polarity": ("neg",),
    "modal": ("able_to", "try_to"),
}
FINITE = ("past", "present", "future")
MODES = ("narration", "direct_speech", "direct_thought")
REL_ORDER = {"subject": 0, "indirect-object": 1, "object": 2, "attribute": 3, "adjunct": 4}

_PRONOUNS = {"feminine": "she", "masculine": "he", "neuter": "it", "unspecified": "they"}
_ARTICLES = {"the": "def", "a": "indef", "every": "every", "some": "some", "none": "none"}


class TranslationError(Exception):
    pass


@dataclass(frozen=True)
class SyntaxNode:
    """One lexico-syntactic unit and the units it governs.

    ``marker``/``site`` are set only on nodes inserted by a personality
    model; ``stuttered`` flags a content word whose lexeme was stuttered.
    """

    lexeme: str
    cls: str
    features: dict = field(default_factory=dict)
    children: tuple["SyntaxNode", ...] = ()
    ref: str | None = None
    marker: str | None = None
    site: str | None = None
    stuttered: bool = False

    def get(self, key, default=None):
        return self.features.get(key, default)

    @property
    def rel(self) -> str | None:
        return self.features.get("rel")

    def walk(self) -> Iterator["SyntaxNode"]:
        yield self
        for child in self.children:
            yield from child.walk()

    def size(self) -> int:
        return sum(1 for _ in self.walk())

    def content_children(self) -> tuple["SyntaxNode", ...]:
        return tuple(c for c in self.children if c.marker is None)

    def markers(self, site: str | None = None) -> tuple["SyntaxNode", ...]:
        return tuple(
            c for c in self.children if c.marker is not None and (site is None or c.site == site)
        )


@dataclass(frozen=True)
class UtterancePlan:
    tree: SyntaxNode
    mode: str = "narration"
    speaker: str | None = None
    matrix: SyntaxNode | None = None
    source_span: tuple[int, int] = (0, 0)

    def __post_init__(self):
        if self.mode not in MODES:
            raise TranslationError(f"unknown plan mode {self.mode!r}")
        if self.mode == "narration" and (self.speaker is not None or self.matrix is not None):
            raise TranslationError("a narration plan has no speaker or attribution clause")
        if self.mode != "narration" and (self.speaker is None or self.matrix is None):
            raise TranslationError(f"a {self.mode} plan needs a speaker and an attribution clause")

    @property
    def direct(self) -> bool:
        return self.mode != "narration"


@dataclass
class _Context:
    graph: StoryGraph
    lexicon: Lexicon
    quote: bool = False
    speaker: str | None = None


def _node(lexeme, cls, children=(), ref=None, **features) -> SyntaxNode:
    feats = {k: v for k, v in features.items() if v is not None}
    return SyntaxNode(lexeme, cls, feats, tuple(children), ref)


def _clause_tense(prop: Proposition, ctx: _Context) -> str:
    if not ctx.quote:
        return "past"
    kind = prop.embedding.kind if prop.embedding else None
    return "future" if kind in ("future", "try_to", "in_order_to") else "present"


def _person(entity: Entity, ctx: _Context) -> str:
    if ctx.quote and entity.id == ctx.speaker:
        return "1"
    if entity.kind == "interlocutor":
        if not ctx.quote:
            raise TranslationError(
                f"interlocutor {entity.id!r} referenced outside direct speech"
            )
        return "2"
    return "3"


def _entity_node(ref: EntityRef, ctx: _Context, rel: str) -> SyntaxNode:
    entity = ctx.graph.entity(ref.id)
    person = _person(entity, ctx)
    if ref.pronoun:
        lexeme = _PRONOUNS[entity.gender]
        article = "none"
    else:
        lexeme = entity.lexeme
        article = "def" if entity.definite else "indef"
    if person != "3" or lexeme[:1].isupper():
        article = "none"
    number = "pl" if lexeme == "they" else "sg"
    return _node(lexeme, "noun", ref=ref.id, rel=rel, person=person, number=number, article=article)


def _np_node(np: NounPhrase, ctx: _Context, rel: str) -> SyntaxNode:
    entity = ctx.graph.entity(np.head)
    person = _person(entity, ctx)
    if np.det is not None:
        article = _ARTICLES[np.det]
    else:
        article = "def" if entity.definite else "indef"
    if person != "3" or entity.lexeme[:1].isupper():
        article = "none"
    children = [_node(a, "adjective", rel="attribute") for a in np.adjectives]
    if np.possessor is not None:
        owner = _argument_node(np.possessor, ctx, "object")
        children.append(_node("of", "functional", [owner], rel="attribute"))
    if np.complement is not None:
        verb = _verb_node(np.complement, ctx, "inf", "object")
        children.append(_node("to", "functional", [verb], rel="attribute"))
    return _node(
        entity.lexeme,
        "noun",
        children,
        ref=np.head,
        rel=rel,
        person=person,
        number="pl" if np.plural else "sg",
        article=article,
    )


def _adjective_node(ap: AdjectivePhrase, ctx: _Context, rel: str) -> SyntaxNode:
    children = []
    if ap.prep is not None:
        obj = _argument_node(ap.obj, ctx, "object")
        children.append(_node(ap.prep, "functional", [obj], rel="attribute"))
    return _node(ap.lexeme, "adjective", children, rel=rel)


def _argument_node(arg, ctx: _Context, rel: str) -> SyntaxNode:
    if isinstance(arg, EntityRef):
        return _entity_node(arg, ctx, rel)
    if isinstance(arg, NounPhrase):
        return _np_node(arg, ctx, rel)
    if isinstance(arg, AdjectivePhrase):
        return _adjective_node(arg, ctx, rel)
    if isinstance(arg, Proposition):
        return _verb_node(arg, ctx, _clause_tense(arg, ctx), rel)
    raise TranslationError(f"cannot map constituent {arg!r}")


def _adjunct_nodes(prop: Proposition, ctx: _Context) -> list[SyntaxNode]:
    out = []
    for adjunct in prop.adjuncts:
        obj = _argument_node(adjunct.value, ctx, "object")
        out.append(_node(adjunct.prep, "functional", [obj], rel="adjunct"))
    return out


def _verb_node(prop: Proposition, ctx: _Context, tense: str, rel: str | None) -> SyntaxNode:
    frame = ctx.lexicon.lookup_frame(prop.frame_id)
    emb = prop.embedding.kind if prop.embedding else None
    args = []
    for role, arg in prop.args:
        relation = frame.relation(role)
        if relation is None:
            raise TranslationError(
                f"role {role!r} has no syntactic mapping in frame {frame.frame_id!r}"
            )
        args.append(_argument_node(arg, ctx, relation))
    args.sort(key=lambda n: REL_ORDER[n.rel])
    children = args
    children += [_node(m, "adverb", rel="adjunct") for m in prop.manner]
    children += _adjunct_nodes(prop, ctx)
    if emb == "if_then":
        cond = prop.embedding.clause
        clause = _verb_node(cond, ctx, _clause_tense(cond, ctx), "object")
        children.append(_node("if", "functional", [clause], rel="adjunct"))
    elif emb == "in_order_to":
        clause = _verb_node(prop.embedding.clause, ctx, "inf", "object")
        children.append(_node("in_order_to", "functional", [clause], rel="adjunct"))
    return _node(
        frame.lexeme,
        "verb",
        children,
        rel=rel,
        tense=tense,
        modal=emb if emb in ("able_to", "try_to") else None,
        polarity="neg" if prop.negated else None,
    )


def build_syntax_tree(prop: Proposition, graph: StoryGraph, lexicon: Lexicon | None = None) -> SyntaxNode:
    """Narration (third person, past tense) tree for one proposition."""
    ctx = _Context(graph, lexicon or default_lexicon())
    return _verb_node(prop, ctx, "past", None)


def collect_adjuncts(prop: Proposition, graph: StoryGraph, lexicon: Lexicon | None = None) -> list[SyntaxNode]:
    ctx = _Context(graph, lexicon or default_lexicon())
    return _adjunct_nodes(prop, ctx)


def _matrix(prop: Proposition, speaker: str, ctx: _Context) -> SyntaxNode:
    frame = ctx.lexicon.lookup_frame(prop.frame_id)
    narr = _Context(ctx.graph, ctx.lexicon)
    subject = _entity_node(EntityRef(speaker), narr, "subject")
    return _node(frame.lexeme, "verb", [subject], tense="past")


def apply_direct_speech(
    prop: Proposition,
    speaker: str,
    graph: StoryGraph,
    lexicon: Lexicon | None = None,
    source_span: tuple[int, int] = (0, 0),
) -> UtterancePlan:
    lexicon = lexicon or default_lexicon()
    frame = lexicon.lookup_frame(prop.frame_id)
    if not prop.directly or not frame.communication_or_cognition:
        raise TranslationError(
            f"direct speech needs 'directly' on a communication or cognition frame, got {prop.frame_id!r}"
        )
    quoted = prop.arg("theme")
    if not isinstance(quoted, Proposition):
        raise TranslationError("direct speech needs a proposition as its theme")
    graph.entity(speaker)
    ctx = _Context(graph, lexicon, quote=True, speaker=speaker)
    tree = _verb_node(quoted, ctx, _clause_tense(quoted, ctx), None)
    return UtterancePlan(
        tree=tree,
        mode="direct_thought" if frame.cognition else "direct_speech",
        speaker=speaker,
        matrix=_matrix(prop, speaker, ctx),
        source_span=source_span,
    )


def translate_story(graph: StoryGraph, lexicon: Lexicon | None = None) -> list[UtterancePlan]:
    lexicon = lexicon or default_lexicon()
    plans = []
    for span, prop in graph.actions():
        if prop.directly:
            agent = prop.arg("agent")
            if not isinstance(agent, EntityRef):
                raise TranslationError(f"speaker of action {span} must be an entity")
            plans.append(apply_direct_speech(prop, agent.id, graph, lexicon, span))
        else:
            tree = build_syntax_tree(prop, graph, lexicon)
            plans.append(UtterancePlan(tree=tree, source_span=span))
    return plans


def _rebind(node: SyntaxNode, fn) -> SyntaxNode:
    node = fn(node)
    if node.children:
        node = replace(node, children=tuple(_rebind(c, fn) for c in node.children))
    return node


def substitute_speaker(
    plans: list[UtterancePlan], old: str, new: str, graph: StoryGraph
) -> list[UtterancePlan]:
    """Give ``old``'s direct speech to ``new``; narration is left alone."""
    graph.entity(old)
    target = graph.entity(new)

    def matrix_fn(node):
        if node.ref == old and node.cls == "noun":
            lexeme = _PRONOUNS[target.gender] if node.lexeme in _PRONOUNS.values() else target.lexeme
            feats = dict(node.features, article="def" if target.definite else "indef")
            if lexeme in _PRONOUNS.values() or lexeme[:1].isupper():
                feats["article"] = "none"
            return replace(node, ref=new, lexeme=lexeme, features=feats)
        return node

    def quote_fn(node):
        if node.cls != "noun":
            return node
        if node.ref == old and node.get("person") == "1":
            lexeme = _PRONOUNS[target.gender] if node.lexeme in _PRONOUNS.values() else target.lexeme
            return replace(node, ref=new, lexeme=lexeme)
        if node.ref == new and node.get("person") != "1":
            return replace(node, features=dict(node.features, person="1", article="none"))
        return node

    out = []
    for plan in plans:
        if plan.speaker != old:
            out.append(plan)
            continue
        out.append(
            replace(
                plan,
                speaker=new,
                matrix=_rebind(plan.matrix, matrix_fn),
                tree=_rebind(plan.tree, quote_fn),
            )
        )
    return out


def node_violations(root: SyntaxNode) -> list[str]:
    """Structural checks: closed classes and features, verb root, relations."""
    out = []
    if root.cls != "verb":
        out.append(f"root {root.lexeme!r} is a {root.cls}, not a verb")
    if root.rel is not None:
        out.append(f"root {root.lexeme!r} carries relation {root.rel!r}")

    def visit(node, is_root):
        if node.cls not in CLASSES:
            out.append(f"{node.lexeme!r} has unknown class {node.cls!r}")
        for key, value in node.features.items():
            if key not in FEATURE_VALUES:
                out.append(f"{node.lexeme!r} has unknown feature {key!r}")
            elif value not in FEATURE_VALUES[key]:
                out.append(f"{node.lexeme!r} has bad {key} value {value!r}")
        if not is_root and node.rel is None:
            out.append(f"{node.lexeme!r} has no relation to its governor")
        for child in node.children:
            visit(child, False)

    visit(root, True)
    return out


def plan_violations(plan: UtterancePlan) -> list[str]:
    """Tense and person discipline plus structural checks for one plan."""
    out = node_violations(plan.tree)
    narrated = [plan.matrix] if plan.direct else [plan.tree]
    quoted = [plan.tree] if plan.direct else []
    for tree in narrated:
        out += node_violations(tree) if tree is not plan.tree else []
        for node in tree.walk():
            tense = node.get("tense")
            if tense in FINITE and tense != "past":
                out.append(f"narration verb {node.lexeme!r} has tense {tense}")
            if node.get("person") in ("1", "2"):
                out.append(f"narration noun {node.lexeme!r} is person {node.get('person')}")
    for tree in quoted:
        for node in tree.walk():
            tense = node.get("tense")
            if tense in FINITE and tense not in ("present", "future"):
                out.append(f"quoted verb {node.lexeme!r} has tense {tense}")
    return out
