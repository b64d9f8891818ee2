"""Surface realization of utterance plans into English sentences.

Word order inside a clause::

    [clause-initial markers] [if-clause] subject [manner] [aux or copula]
    [pre-verb markers] verb [indirect object] [object] [attribute] [adjuncts]

followed, for the root clause only, by in-group markers and a tag. Direct
plans render as the attribution clause followed by the quote in double
quotes, with terminal punctuation inside the quotes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lexicon import Lexicon, default_lexicon
from .persona import PersonalityModel, apply_model, choose_attribution, stutter, unstutter
from .translator import SyntaxNode, UtterancePlan

GENITIVE_STYLES = ("of_genitive", "s_genitive")

_CASES = {"subject": 0, "object": 1, "possessive": 2}
_PRONOUN_FORMS = {
    ("1", "sg"): ("I", "me", "my"),
    ("1", "pl"): ("we", "us", "our"),
    ("2", "sg"): ("you", "you", "your"),
    ("2", "pl"): ("you", "you", "your"),
    "he": ("he", "him", "his"),
    "she": ("she", "her", "her"),
    "it": ("it", "it", "its"),
    "they": ("they", "them", "their"),
}
_DETERMINERS = {"def": "the", "every": "every", "some": "some", "none": ""}


class RealizationError(Exception):
    pass


@dataclass(frozen=True)
class RealizationOptions:
    genitive_style: str = "of_genitive"

    def __post_init__(self):
        if self.genitive_style not in GENITIVE_STYLES:
            raise RealizationError(f"unknown genitive style {self.genitive_style!r}")


def _join(tokens) -> str:
    out = ""
    for tok in tokens:
        if not tok:
            continue
        if not out or tok.startswith(","):
            out += tok
        else:
            out += " " + tok
    return out


def _is_pronoun(node: SyntaxNode) -> bool:
    return node.get("person") in ("1", "2") or node.lexeme in _PRONOUN_FORMS


def _surface(node: SyntaxNode, inflect) -> str:
    base = unstutter(node.lexeme) if node.stuttered else node.lexeme
    word = inflect(base)
    return stutter(word) if node.stuttered else word


class _Realizer:
    def __init__(self, lexicon: Lexicon, opts: RealizationOptions):
        self.lexicon = lexicon
        self.opts = opts

    # noun phrases ---------------------------------------------------------------

    def pronoun(self, node: SyntaxNode, case: str) -> str:
        person = node.get("person", "3")
        key = (person, node.get("number", "sg")) if person in ("1", "2") else node.lexeme
        return _PRONOUN_FORMS[key][_CASES[case]]

    def np(self, node: SyntaxNode, case: str = "subject") -> str:
        if _is_pronoun(node):
            return self.pronoun(node, case)
        parts = node.content_children()
        adjectives = [self.ap(c) for c in parts if c.cls == "adjective"]
        owner = next((c for c in parts if c.cls == "functional" and c.lexeme == "of"), None)
        to = next((c for c in parts if c.cls == "functional" and c.lexeme == "to"), None)
        plural = node.get("number") == "pl"
        head = _surface(node, self.lexicon.plural if plural else (lambda w: w))

        if owner is not None and (
            self.opts.genitive_style == "s_genitive" or _is_pronoun(owner.children[0])
        ):
            words = [self.possessive(owner.children[0])] + adjectives + [head]
        else:
            words = adjectives + [head]
            article = node.get("article", "def")
            if article == "indef":
                # bare plural: "grapes", not "a grapes"
                if not plural:
                    words.insert(0, "an" if words[0][:1].lower() in "aeiou" else "a")
            else:
                words.insert(0, _DETERMINERS.get(article, ""))
            if owner is not None:
                words += ["of", self.np(owner.children[0], "object")]
        if to is not None:
            words += ["to", self.clause(to.children[0], "bare_inf")]
        return _join(words)

    def possessive(self, node: SyntaxNode) -> str:
        if _is_pronoun(node):
            return self.pronoun(node, "possessive")
        text = self.np(node, "object")
        return text + ("'" if text.endswith("s") and node.get("number") == "pl" else "'s")

    def ap(self, node: SyntaxNode) -> str:
        words = [m.lexeme for m in node.markers("pre_adjective")]
        words.append(_surface(node, lambda w: w))
        for c in node.content_children():
            if c.cls == "functional":
                words += [c.lexeme, self.np(c.children[0], "object")]
        return _join(words)

    def argument(self, node: SyntaxNode, case: str) -> str:
        if node.cls == "verb":
            return self.clause(node, "finite")
        if node.cls == "adjective":
            return self.ap(node)
        if node.cls == "noun":
            return self.np(node, case)
        raise RealizationError(f"cannot realize {node.cls} {node.lexeme!r} as an argument")

    # verbs ------------------------------------------------------------------------

    def verb_group(self, verb: SyntaxNode, subject: SyntaxNode | None) -> list[str]:
        tense = verb.get("tense", "past")
        person = subject.get("person", "3") if subject is not None else "3"
        number = subject.get("number", "sg") if subject is not None else "sg"
        modal = verb.get("modal")
        negated = verb.get("polarity") == "neg"
        lexeme = verb.lexeme
        if modal == "able_to":
            main, tail = "be", ["able to", lexeme]
        elif modal == "try_to":
            main, tail = "try", ["to", lexeme]
        else:
            main, tail = lexeme, []
        neg = ["not"] if negated else []

        def fin(word):
            return self.lexicon.inflect(word, tense, person, number)

        if tense == "future":
            return ["will"] + neg + [main] + tail
        if tense == "inf":
            return neg + [main] + tail
        if not negated:
            return [fin(main)] + tail
        if main == "be":
            return [fin("be"), "not"] + tail
        frame = self.lexicon.frame_for_lexeme(main)
        if frame is not None and "failed_to" in frame.flags:
            return [fin("fail"), "to", main] + tail
        return [fin("do"), "not", main] + tail

    def clause(self, verb: SyntaxNode, form: str = "finite") -> str:
        """Render a verb-rooted clause.

        ``form`` is ``finite``, ``bare_inf`` (``get the cheese``, subject
        dropped) or ``for_inf`` (``for her to show ...``).
        """
        parts = verb.content_children()
        by_rel = {}
        for c in parts:
            by_rel.setdefault(c.rel, []).append(c)
        subject = next(iter(by_rel.get("subject", [])), None)
        words = [m.lexeme for m in verb.markers("clause_initial")]
        for c in by_rel.get("adjunct", []):
            if c.cls == "functional" and c.lexeme == "if":
                words += ["if", self.clause(c.children[0], "finite")]
        if form == "finite" and subject is not None:
            words.append(self.np(subject, "subject"))
        elif form == "for_inf" and subject is not None:
            words += ["for", self.np(subject, "object")]
        words += [c.lexeme for c in by_rel.get("adjunct", []) if c.cls == "adverb"]
        group = self.verb_group(verb, subject)
        hedges = [m.lexeme for m in verb.markers("pre_verb")]
        # hedges follow an auxiliary or copula: "will basically fight", "are somewhat able"
        cut = 1 if len(group) > 1 or verb.lexeme == "be" else 0
        group = group[:cut] + hedges + group[cut:]
        if form == "for_inf":
            group = ["to"] + group
        words += group
        for rel in ("indirect-object", "object", "attribute"):
            for c in by_rel.get(rel, []):
                words.append(self.argument(c, "subject" if rel == "attribute" else "object"))
        for c in by_rel.get("adjunct", []):
            if c.cls != "functional" or c.lexeme == "if":
                continue
            (obj,) = c.children[:1] or (None,)
            if obj is None:
                raise RealizationError(f"adjunct {c.lexeme!r} governs nothing")
            if c.lexeme == "in_order_to":
                words += ["in order", self.clause(obj, "for_inf")]
            elif obj.cls == "verb":
                words += [c.lexeme.replace("_", " "), self.clause(obj, "finite")]
            else:
                words += [c.lexeme.replace("_", " "), self.np(obj, "object")]
        return _join(words)

    # sentences ------------------------------------------------------------------------

    def sentence_body(self, tree: SyntaxNode) -> tuple[str, str]:
        words = [self.clause(tree, "finite")]
        terminal = "."
        for m in tree.markers("clause_final"):
            if m.marker == "exclamation":
                terminal = "!"
            elif m.marker == "tag_question":
                words.append("," + " " + m.lexeme)
                terminal = "?" if terminal != "!" else terminal
            else:
                words.append(m.lexeme)
        return _join(words), terminal

    def realize(self, plan: UtterancePlan) -> str:
        body, terminal = self.sentence_body(plan.tree)
        if not plan.direct:
            return _capitalize(body) + terminal
        matrix = _capitalize(self.clause(plan.matrix, "finite"))
        return f'{matrix} "{body}{terminal}"'


def _capitalize(text: str) -> str:
    return text[:1].upper() + text[1:]


def realize(
    plan: UtterancePlan,
    opts: RealizationOptions | None = None,
    lexicon: Lexicon | None = None,
) -> str:
    return _Realizer(lexicon or default_lexicon(), opts or RealizationOptions()).realize(plan)


def render_np(
    node: SyntaxNode,
    opts: RealizationOptions | None = None,
    lexicon: Lexicon | None = None,
    case: str = "subject",
) -> str:
    return _Realizer(lexicon or default_lexicon(), opts or RealizationOptions()).np(node, case)


def style_plans(
    plans: list[UtterancePlan],
    voice_map: dict[str, PersonalityModel],
    narrator_model: PersonalityModel,
    seed: int = 0,
    lexicon: Lexicon | None = None,
) -> list[UtterancePlan]:
    """Apply the narrator's model to narration and each speaker's model to their quotes."""
    styled = []
    for plan in plans:
        if not plan.direct:
            styled.append(apply_model(plan, narrator_model, seed))
            continue
        try:
            model = voice_map[plan.speaker]
        except KeyError:
            raise RealizationError(f"speaker {plan.speaker!r} has no model in the voice map") from None
        plan = choose_attribution(plan, narrator_model, seed, lexicon)
        styled.append(apply_model(plan, model, seed))
    return styled


def render_story_text(
    plans: list[UtterancePlan],
    voice_map: dict[str, PersonalityModel],
    narrator_model: PersonalityModel,
    seed: int = 0,
    opts: RealizationOptions | None = None,
    lexicon: Lexicon | None = None,
    annotated: bool = False,
) -> str:
    """Render a whole telling, one sentence per line."""
    realizer = _Realizer(lexicon or default_lexicon(), opts or RealizationOptions())
    lines = []
    for plan in style_plans(plans, voice_map, narrator_model, seed, lexicon):
        line = realizer.realize(plan)
        if annotated and plan.direct:
            cut = line.index('"')
            matrix, quote = line[:cut], line[cut:]
            line = f"{matrix}[q speaker={plan.speaker}]{quote}[/q]"
        lines.append(line)
    return "\n".join(lines) + "\n"
