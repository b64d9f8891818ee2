"""Timeline-layer story graphs and the textual story format.

A story file has three kinds of lines::

    title: The Fox and the Crow
    entity crow: crow, character, feminine, definite
    timespan 1:
      sit(crow) [on: branch(of: tree)]

Propositions use a functional notation. The functor is a frame id from the
lexicon; positional arguments fill the frame's roles in order and keyword
arguments name a role (``agent:``, ``theme:``, ``recipient:``,
``attribute:``). Other keywords and flags:

* ``directly`` quotes the theme as direct speech (communication/cognition
  frames only), ``not`` negates,
* ``manner: loudly`` adds a manner adverb (repeatable),
* ``if: <prop>`` makes the proposition the consequent of a conditional,
  ``in_order_to: <prop>`` attaches a purpose clause,
* ``able_to(<prop>)``, ``try_to(<prop>)`` and ``future(<prop>)`` wrap a
  proposition in an embedding,
* a trailing ``[prep: arg, ...]`` lists adjuncts in source order.

Arguments are entity ids, ``pro(id)`` for a pronominal reference, a noun
phrase ``head(of: possessor, det: every, mod: adjective, num: pl,
to: <prop>)`` headed by an entity id, an adjective phrase
``adj(word, to: arg)``, or a nested proposition. A proposition may span
several lines as long as its brackets are open.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, fields, replace
from typing import Iterator, Union

from .lexicon import Lexicon, default_lexicon

ENTITY_KINDS = ("character", "object", "interlocutor", "narrator")
GENDERS = ("feminine", "masculine", "neuter", "unspecified")
EMBEDDINGS = ("able_to", "try_to", "future", "in_order_to", "if_then")
DETERMINERS = ("the", "a", "every", "some", "none")
MAX_DEPTH = 4

_WRAPPERS = ("able_to", "try_to", "future")
RESERVED = frozenset(
    _WRAPPERS + ("adj", "pro", "directly", "not", "manner", "if", "in_order_to")
)


class StoryError(Exception):
    pass


class StorySyntaxError(StoryError):
    def __init__(self, message, line=None, column=None):
        self.line, self.column = line, column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


class UnknownEntityError(StoryError):
    pass


class UnknownFrameReference(StoryError):
    pass


class StoryValidationError(StoryError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class DirectlyOnNonCommunicationError(StoryValidationError):
    pass


# -- domain types -------------------------------------------------------------


@dataclass(frozen=True)
class Entity:
    id: str
    lexeme: str
    kind: str = "object"
    gender: str = "neuter"
    definite: bool = True


@dataclass(frozen=True)
class EntityRef:
    id: str
    pronoun: bool = False


@dataclass(frozen=True)
class NounPhrase:
    head: str
    possessor: "Argument | None" = None
    adjectives: tuple[str, ...] = ()
    det: str | None = None
    plural: bool = False
    complement: "Proposition | None" = None


@dataclass(frozen=True)
class AdjectivePhrase:
    lexeme: str
    prep: str | None = None
    obj: "Argument | None" = None


@dataclass(frozen=True)
class Adjunct:
    prep: str
    value: "Argument"


@dataclass(frozen=True)
class Embedding:
    kind: str
    clause: "Proposition | None" = None


@dataclass(frozen=True)
class Proposition:
    predicate: str
    frame_id: str
    args: tuple[tuple[str, "Argument"], ...] = ()
    adjuncts: tuple[Adjunct, ...] = ()
    manner: tuple[str, ...] = ()
    directly: bool = False
    embedding: Embedding | None = None
    negated: bool = False

    def arg(self, role: str):
        for name, value in self.args:
            if name == role:
                return value
        return None

    @property
    def modifiers(self) -> frozenset:
        mods = {("manner", m) for m in self.manner}
        if self.directly:
            mods.add("directly")
        return frozenset(mods)


Argument = Union[EntityRef, NounPhrase, AdjectivePhrase, Proposition]


@dataclass(frozen=True)
class Timespan:
    index: int
    actions: tuple[Proposition, ...]


@dataclass(frozen=True)
class StoryGraph:
    title: str
    entities: tuple[Entity, ...]
    timeline: tuple[Timespan, ...]
    _by_id: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_by_id", {e.id: e for e in self.entities})

    def entity(self, entity_id: str) -> Entity:
        try:
            return self._by_id[entity_id]
        except KeyError:
            raise UnknownEntityError(f"unknown entity reference {entity_id!r}") from None

    def has_entity(self, entity_id: str) -> bool:
        return entity_id in self._by_id

    def actions(self) -> Iterator[tuple[tuple[int, int], Proposition]]:
        """Yield ``((timespan index, action index), proposition)`` in timeline order."""
        for span in self.timeline:
            for i, prop in enumerate(span.actions, start=1):
                yield (span.index, i), prop


# -- traversal helpers ----------------------------------------------------------


def sub_arguments(value) -> Iterator:
    """Direct children of an argument or proposition, in source order."""
    if isinstance(value, Proposition):
        for _, arg in value.args:
            yield arg
        for adj in value.adjuncts:
            yield adj.value
        if value.embedding is not None and value.embedding.clause is not None:
            yield value.embedding.clause
    elif isinstance(value, NounPhrase):
        if value.possessor is not None:
            yield value.possessor
        if value.complement is not None:
            yield value.complement
    elif isinstance(value, AdjectivePhrase):
        if value.obj is not None:
            yield value.obj


def walk(value) -> Iterator:
    yield value
    for child in sub_arguments(value):
        yield from walk(child)


def nesting_depth(value) -> int:
    """Number of propositions on the deepest chain through ``value``."""
    below = max((nesting_depth(c) for c in sub_arguments(value)), default=0)
    return below + (1 if isinstance(value, Proposition) else 0)


def entity_ids(value) -> Iterator[str]:
    for node in walk(value):
        if isinstance(node, EntityRef):
            yield node.id
        elif isinstance(node, NounPhrase):
            yield node.head


# -- tokenizer ------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_]*)|([()\[\],:]))")


@dataclass
class _Token:
    kind: str  # "ident" or the punctuation character
    text: str
    line: int
    column: int


def _tokenize(text: str, line: int, column: int) -> list[_Token]:
    tokens = []
    pos = 0
    lineno, linestart = line, -column + 1
    while pos < len(text):
        if text[pos] == "\n":
            lineno += 1
            linestart = pos + 1
            pos += 1
            continue
        if text[pos] in " \t\r":
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise StorySyntaxError(f"unexpected character {text[pos]!r}", lineno, pos - linestart + 1)
        start = m.start(1) if m.group(1) else m.start(2)
        col = start - linestart + 1
        if m.group(1):
            tokens.append(_Token("ident", m.group(1), lineno, col))
        else:
            tokens.append(_Token(m.group(2), m.group(2), lineno, col))
        pos = m.end()
    return tokens


@dataclass
class _Term:
    name: str
    token: _Token
    args: list | None = None  # list of (keyword or None, _Term); None when bare
    adjuncts: list = field(default_factory=list)  # list of (prep, _Term)


class _TermParser:
    def __init__(self, tokens, end_line, end_col):
        self.tokens = tokens
        self.pos = 0
        self.end = (end_line, end_col)

    def peek(self, offset=0):
        i = self.pos + offset
        return self.tokens[i] if i < len(self.tokens) else None

    def fail(self, message, token=None):
        token = token or self.peek()
        if token is None:
            raise StorySyntaxError(message + " at end of proposition", *self.end)
        raise StorySyntaxError(message, token.line, token.column)

    def expect(self, kind):
        tok = self.peek()
        if tok is None or tok.kind != kind:
            self.fail(f"expected {kind!r}" + (f", found {tok.text!r}" if tok else ""))
        self.pos += 1
        return tok

    def term(self) -> _Term:
        tok = self.expect("ident")
        term = _Term(tok.text, tok)
        nxt = self.peek()
        if nxt is not None and nxt.kind == "(":
            self.pos += 1
            term.args = self._arglist(")")
        nxt = self.peek()
        if nxt is not None and nxt.kind == "[":
            self.pos += 1
            term.adjuncts = self._arglist("]", keyword_required=True)
        return term

    def _arglist(self, closer, keyword_required=False):
        items = []
        if self.peek() is not None and self.peek().kind == closer:
            self.pos += 1
            return items
        while True:
            key = None
            if (
                self.peek() is not None
                and self.peek().kind == "ident"
                and self.peek(1) is not None
                and self.peek(1).kind == ":"
            ):
                key = self.expect("ident").text
                self.expect(":")
            elif keyword_required:
                self.fail("expected 'preposition: argument'")
            items.append((key, self.term()))
            tok = self.peek()
            if tok is not None and tok.kind == ",":
                self.pos += 1
                continue
            self.expect(closer)
            return items


# -- interpretation of parsed terms -------------------------------------------------


class _Interpreter:
    def __init__(self, entities: dict[str, Entity], lexicon: Lexicon):
        self.entities = entities
        self.lexicon = lexicon

    def _err(self, cls, message, term):
        if cls is StorySyntaxError:
            return StorySyntaxError(message, term.token.line, term.token.column)
        return cls(f"line {term.token.line}, column {term.token.column}: {message}")

    @staticmethod
    def _word(term: _Term, what: str) -> str:
        if term.args is not None or term.adjuncts:
            raise StorySyntaxError(f"{what} must be a bare word", term.token.line, term.token.column)
        return term.name

    def argument(self, term: _Term):
        name = term.name
        if name in self.lexicon or name in _WRAPPERS:
            return self.proposition(term)
        if term.adjuncts:
            raise self._err(StorySyntaxError, "adjuncts attach to propositions only", term)
        if name == "pro":
            if not term.args or len(term.args) != 1 or term.args[0][0] is not None:
                raise self._err(StorySyntaxError, "pro() takes one entity id", term)
            return EntityRef(self._entity_id(term.args[0][1]), pronoun=True)
        if name == "adj":
            return self.adjective(term)
        if name in self.entities:
            if term.args is None:
                return EntityRef(name)
            return self.noun_phrase(term)
        if term.args is not None:
            raise self._err(UnknownFrameReference, f"unknown frame id {name!r}", term)
        raise self._err(UnknownEntityError, f"unknown entity reference {name!r}", term)

    def _entity_id(self, term: _Term) -> str:
        name = self._word(term, "entity reference")
        if name not in self.entities:
            raise self._err(UnknownEntityError, f"unknown entity reference {name!r}", term)
        return name

    def noun_phrase(self, term: _Term) -> NounPhrase:
        possessor = complement = det = None
        adjectives, plural = [], False
        for key, value in term.args:
            if key == "of":
                possessor = self.argument(value)
                if isinstance(possessor, (Proposition, AdjectivePhrase)):
                    raise self._err(StorySyntaxError, "possessor must be a noun phrase", value)
            elif key == "det":
                det = self._word(value, "determiner")
                if det not in DETERMINERS:
                    raise self._err(StorySyntaxError, f"unknown determiner {det!r}", value)
            elif key == "mod":
                adjectives.append(self._word(value, "adjective"))
            elif key == "num":
                num = self._word(value, "number")
                if num not in ("sg", "pl"):
                    raise self._err(StorySyntaxError, "num must be sg or pl", value)
                plural = num == "pl"
            elif key == "to":
                complement = self.argument(value)
                if not isinstance(complement, Proposition):
                    raise self._err(StorySyntaxError, "to: expects a proposition", value)
            else:
                raise self._err(StorySyntaxError, f"unexpected noun phrase argument {key!r}", value)
        return NounPhrase(term.name, possessor, tuple(adjectives), det, plural, complement)

    def adjective(self, term: _Term) -> AdjectivePhrase:
        if not term.args or term.args[0][0] is not None:
            raise self._err(StorySyntaxError, "adj() needs an adjective", term)
        lexeme = self._word(term.args[0][1], "adjective")
        if len(term.args) == 1:
            return AdjectivePhrase(lexeme)
        if len(term.args) > 2 or term.args[1][0] is None:
            raise self._err(StorySyntaxError, "adj() takes one 'prep: argument' complement", term)
        prep, value = term.args[1]
        return AdjectivePhrase(lexeme, prep, self.argument(value))

    def proposition(self, term: _Term) -> Proposition:
        name = term.name
        if term.args is None:
            raise self._err(StorySyntaxError, f"{name} needs an argument list", term)
        if name in _WRAPPERS:
            if len(term.args) != 1 or term.args[0][0] is not None or term.adjuncts:
                raise self._err(StorySyntaxError, f"{name}() wraps exactly one proposition", term)
            inner = self.argument(term.args[0][1])
            if not isinstance(inner, Proposition):
                raise self._err(StorySyntaxError, f"{name}() wraps a proposition", term)
            if inner.embedding is not None:
                raise self._err(StorySyntaxError, "a proposition carries at most one embedding", term)
            return replace(inner, embedding=Embedding(name))

        frame = self.lexicon.lookup_frame(name)
        roles = list(frame.role_names)
        args: dict[str, Argument] = {}
        manner, directly, negated, embedding = [], False, False, None
        positional = 0
        for key, value in term.args:
            if key is None and value.args is None and value.name in ("directly", "not"):
                if value.name == "directly":
                    directly = True
                else:
                    negated = True
                continue
            if key is None:
                if positional >= len(roles):
                    raise self._err(StorySyntaxError, f"too many arguments for frame {name!r}", value)
                role = roles[positional]
                positional += 1
            elif key == "manner":
                manner.append(self._word(value, "manner adverb"))
                continue
            elif key in ("if", "in_order_to"):
                clause = self.argument(value)
                if not isinstance(clause, Proposition):
                    raise self._err(StorySyntaxError, f"{key}: expects a proposition", value)
                if embedding is not None:
                    raise self._err(StorySyntaxError, "a proposition carries at most one embedding", value)
                embedding = Embedding("if_then" if key == "if" else key, clause)
                continue
            elif key in roles:
                role = key
            else:
                raise self._err(StorySyntaxError, f"frame {name!r} has no role {key!r}", value)
            if role in args:
                raise self._err(StorySyntaxError, f"role {role!r} filled twice", value)
            args[role] = self.argument(value)
        ordered = tuple((r, args[r]) for r in roles if r in args)
        adjuncts = tuple(Adjunct(prep, self.argument(v)) for prep, v in term.adjuncts)
        return Proposition(
            predicate=frame.lexeme,
            frame_id=name,
            args=ordered,
            adjuncts=adjuncts,
            manner=tuple(manner),
            directly=directly,
            embedding=embedding,
            negated=negated,
        )


# -- parse / serialize ---------------------------------------------------------------

_ENTITY_LINE = re.compile(r"entity\s+([A-Za-z_][A-Za-z0-9_]*)\s*:\s*(.*)$")
_SPAN_LINE = re.compile(r"timespan\s+(-?\d+)\s*:\s*$")


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].rstrip()


def _balance(text: str) -> int:
    return sum(text.count(c) for c in "([") - sum(text.count(c) for c in ")]")


def parse_story(source: str, lexicon: Lexicon | None = None, *, check: bool = True) -> StoryGraph:
    """Parse story-format text into a validated :class:`StoryGraph`.

    With ``check`` false the invariant checks are skipped; syntax errors and
    unresolvable references still raise.
    """
    lexicon = lexicon or default_lexicon()
    title = ""
    entities: dict[str, Entity] = {}
    raw_spans: list[tuple[int, list[tuple[str, int, int]]]] = []
    lines = source.splitlines()
    i = 0
    while i < len(lines):
        lineno = i + 1
        line = _strip_comment(lines[i])
        i += 1
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("title:") and not raw_spans:
            title = stripped[len("title:"):].strip()
            continue
        m = _ENTITY_LINE.match(stripped)
        if m:
            if raw_spans:
                raise StorySyntaxError("entities must be declared before the timeline", lineno, 1)
            entity = _parse_entity(m.group(1), m.group(2), lineno)
            if entity.id in entities:
                raise StorySyntaxError(f"entity {entity.id!r} declared twice", lineno, 1)
            entities[entity.id] = entity
            continue
        m = _SPAN_LINE.match(stripped)
        if m:
            raw_spans.append((int(m.group(1)), []))
            continue
        if not raw_spans:
            raise StorySyntaxError(f"unexpected line {stripped!r}", lineno, 1)
        # a proposition, possibly continued while brackets are open
        column = len(line) - len(line.lstrip()) + 1
        text = stripped
        while _balance(text) > 0 and i < len(lines):
            text += "\n" + _strip_comment(lines[i])
            i += 1
        raw_spans[-1][1].append((text, lineno, column))

    interp = _Interpreter(entities, lexicon)
    timeline = []
    for index, props in raw_spans:
        actions = []
        for text, lineno, column in props:
            tokens = _tokenize(text, lineno, column)
            parser = _TermParser(tokens, lineno, column + len(text))
            term = parser.term()
            if parser.peek() is not None:
                parser.fail(f"unexpected {parser.peek().text!r}")
            prop = interp.argument(term)
            if not isinstance(prop, Proposition):
                raise StorySyntaxError("timeline entries must be propositions", lineno, column)
            actions.append(prop)
        timeline.append(Timespan(index, tuple(actions)))

    graph = StoryGraph(title, tuple(entities.values()), tuple(timeline))
    if check:
        violations = validate(graph, lexicon)
        if violations:
            if any(v.rule == "communication frame" for v in violations):
                raise DirectlyOnNonCommunicationError(violations)
            raise StoryValidationError(violations)
    return graph


def _parse_entity(entity_id: str, rest: str, lineno: int) -> Entity:
    parts = [p.strip() for p in rest.split(",")]
    if len(parts) != 4:
        raise StorySyntaxError("entity needs: lexeme, kind, gender, definite|indefinite", lineno, 1)
    lexeme, kind, gender, definiteness = parts
    if kind not in ENTITY_KINDS:
        raise StorySyntaxError(f"unknown entity kind {kind!r}", lineno, 1)
    if gender not in GENDERS:
        raise StorySyntaxError(f"unknown gender {gender!r}", lineno, 1)
    if definiteness not in ("definite", "indefinite"):
        raise StorySyntaxError(f"definiteness must be definite or indefinite", lineno, 1)
    return Entity(entity_id, lexeme, kind, gender, definiteness == "definite")


def load_story(path, lexicon: Lexicon | None = None) -> StoryGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_story(fh.read(), lexicon)


def format_argument(value) -> str:
    if isinstance(value, EntityRef):
        return f"pro({value.id})" if value.pronoun else value.id
    if isinstance(value, NounPhrase):
        parts = []
        if value.possessor is not None:
            parts.append("of: " + format_argument(value.possessor))
        if value.det is not None:
            parts.append("det: " + value.det)
        parts.extend("mod: " + a for a in value.adjectives)
        if value.plural:
            parts.append("num: pl")
        if value.complement is not None:
            parts.append("to: " + format_argument(value.complement))
        return f"{value.head}({', '.join(parts)})"
    if isinstance(value, AdjectivePhrase):
        if value.prep is None:
            return f"adj({value.lexeme})"
        return f"adj({value.lexeme}, {value.prep}: {format_argument(value.obj)})"
    if isinstance(value, Proposition):
        return _format_proposition(value)
    raise TypeError(f"not a story argument: {value!r}")


def _format_proposition(prop: Proposition) -> str:
    parts = [f"{role}: {format_argument(arg)}" for role, arg in prop.args]
    if prop.directly:
        parts.append("directly")
    if prop.negated:
        parts.append("not")
    parts.extend("manner: " + m for m in prop.manner)
    emb = prop.embedding
    if emb is not None and emb.clause is not None:
        key = "if" if emb.kind == "if_then" else emb.kind
        parts.append(f"{key}: {format_argument(emb.clause)}")
    text = f"{prop.frame_id}({', '.join(parts)})"
    if prop.adjuncts:
        text += " [" + ", ".join(f"{a.prep}: {format_argument(a.value)}" for a in prop.adjuncts) + "]"
    if emb is not None and emb.clause is None:
        text = f"{emb.kind}({text})"
    return text


def dump_story(graph: StoryGraph) -> str:
    """Serialize a graph back to the story format (keyword-explicit, one action per line)."""
    out = []
    if graph.title:
        out.append(f"title: {graph.title}")
    for e in graph.entities:
        out.append(
            f"entity {e.id}: {e.lexeme}, {e.kind}, {e.gender}, "
            + ("definite" if e.definite else "indefinite")
        )
    for span in graph.timeline:
        out.append(f"timespan {span.index}:")
        out.extend("  " + _format_proposition(p) for p in span.actions)
    return "\n".join(out) + "\n"


# -- validation ------------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    rule: str
    element: str
    message: str

    def __str__(self):
        return f"{self.rule} violated: {self.message} ({self.element})"


def validate(graph: StoryGraph, lexicon: Lexicon | None = None) -> list[Violation]:
    """Check every story invariant; returns an empty list for a well-formed graph."""
    lexicon = lexicon or default_lexicon()
    out = []
    by_kind: dict[str, list[str]] = {}
    seen_ids = set()
    for e in graph.entities:
        by_kind.setdefault(e.kind, []).append(e.id)
        if e.id in seen_ids:
            out.append(Violation("entity uniqueness", e.id, f"entity {e.id!r} declared twice"))
        seen_ids.add(e.id)
        if e.id in lexicon or e.id in RESERVED:
            out.append(Violation("id collision", e.id, f"entity id {e.id!r} shadows a frame or keyword"))
    for kind, label in (("narrator", "narrator uniqueness"), ("interlocutor", "interlocutor uniqueness")):
        ids = by_kind.get(kind, [])
        if len(ids) > 1:
            out.append(Violation(label, ",".join(ids), f"{len(ids)} entities of kind {kind}"))

    if not graph.timeline:
        out.append(Violation("timeline non-empty", graph.title or "<story>", "the timeline has no timespans"))
    previous = None
    for span in graph.timeline:
        where = f"timespan {span.index}"
        if previous is not None and span.index <= previous:
            out.append(Violation("timespan order", where, f"index {span.index} follows {previous}"))
        previous = span.index
        if not span.actions:
            out.append(Violation("timespan non-empty", where, "timespan has no actions"))
        for k, prop in enumerate(span.actions, start=1):
            out.extend(_check_proposition(prop, graph, lexicon, f"{where} action {k}"))
    return out


def _check_proposition(root: Proposition, graph, lexicon, where) -> list[Violation]:
    out = []
    depth = nesting_depth(root)
    if depth > MAX_DEPTH:
        out.append(Violation("nesting depth", where, f"depth {depth} exceeds {MAX_DEPTH}"))
    for eid in entity_ids(root):
        if not graph.has_entity(eid):
            out.append(Violation("entity reference", where, f"unknown entity {eid!r}"))
    for node in walk(root):
        if not isinstance(node, Proposition):
            continue
        if node.frame_id not in lexicon:
            out.append(Violation("frame reference", where, f"unknown frame {node.frame_id!r}"))
            continue
        frame = lexicon.lookup_frame(node.frame_id)
        if node.directly and not frame.communication_or_cognition:
            out.append(
                Violation(
                    "communication frame",
                    where,
                    f"'directly' on {node.frame_id!r}, which is not a communication or cognition frame",
                )
            )
        elif node.directly and not isinstance(node.arg("theme"), Proposition):
            out.append(Violation("direct speech", where, "'directly' needs a proposition as theme"))
        if node.embedding is not None and node.embedding.kind not in EMBEDDINGS:
            out.append(Violation("embedding", where, f"unknown embedding {node.embedding.kind!r}"))
    return out


def structurally_equal(a: StoryGraph, b: StoryGraph) -> bool:
    return all(getattr(a, f.name) == getattr(b, f.name) for f in fields(StoryGraph) if f.compare)
