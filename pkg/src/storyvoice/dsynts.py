"""DSyntS-style XML interchange for utterance plans.

Document layout::

    <dsynts>
      <sentence mode="direct_speech" speaker="fox" span="9.1">
        <matrix><unit class="verb" lexeme="say" tense="past">...</unit></matrix>
        <unit class="verb" lexeme="see" tense="present">...</unit>
      </sentence>
    </dsynts>

Each ``<unit>`` is one :class:`~storyvoice.translator.SyntaxNode`; its
attributes are ``class``, ``lexeme``, the grammatical features (``rel``,
``tense``, ``person``, ``number``, ``article``, ``polarity``, ``modal``) and
the bookkeeping fields ``ref``, ``marker``, ``site``, ``stuttered``. Units
are written governor first, children in stored order (subject, indirect
object, object, attribute, adjuncts, then inserted markers).
"""

from __future__ import annotations

import xml.etree.ElementTree as ET

from .translator import CLASSES, FEATURE_VALUES, MODES, SyntaxNode, TranslationError, UtterancePlan

_FEATURE_ORDER = ("rel", "tense", "person", "number", "article", "polarity", "modal")
_EXTRA = ("ref", "marker", "site")


class DSyntSSchemaError(ValueError):
    pass


def _unit(node: SyntaxNode) -> ET.Element:
    attrs = {"class": node.cls, "lexeme": node.lexeme}
    for key in _FEATURE_ORDER:
        if key in node.features:
            attrs[key] = node.features[key]
    for key in _EXTRA:
        value = getattr(node, key)
        if value is not None:
            attrs[key] = value
    if node.stuttered:
        attrs["stuttered"] = "true"
    elem = ET.Element("unit", attrs)
    for child in node.children:
        elem.append(_unit(child))
    return elem


def emit_dsynts(plans: list[UtterancePlan]) -> str:
    root = ET.Element("dsynts")
    for plan in plans:
        attrs = {"mode": plan.mode, "span": f"{plan.source_span[0]}.{plan.source_span[1]}"}
        if plan.speaker is not None:
            attrs["speaker"] = plan.speaker
        sentence = ET.SubElement(root, "sentence", attrs)
        if plan.matrix is not None:
            ET.SubElement(sentence, "matrix").append(_unit(plan.matrix))
        sentence.append(_unit(plan.tree))
    ET.indent(root)
    return ET.tostring(root, encoding="unicode") + "\n"


def _node(elem: ET.Element) -> SyntaxNode:
    if elem.tag != "unit":
        raise DSyntSSchemaError(f"expected <unit>, found <{elem.tag}>")
    attrs = dict(elem.attrib)
    cls = attrs.pop("class", None)
    lexeme = attrs.pop("lexeme", None)
    if cls not in CLASSES:
        raise DSyntSSchemaError(f"unit has unknown class {cls!r}")
    if lexeme is None:
        raise DSyntSSchemaError("unit without lexeme")
    extras = {key: attrs.pop(key, None) for key in _EXTRA}
    stuttered = attrs.pop("stuttered", "false")
    if stuttered not in ("true", "false"):
        raise DSyntSSchemaError(f"bad stuttered value {stuttered!r}")
    features = {}
    for key in _FEATURE_ORDER:
        if key in attrs:
            value = attrs.pop(key)
            if value not in FEATURE_VALUES[key]:
                raise DSyntSSchemaError(f"bad {key} value {value!r} on {lexeme!r}")
            features[key] = value
    if attrs:
        raise DSyntSSchemaError(f"unknown unit attributes {sorted(attrs)}")
    return SyntaxNode(
        lexeme=lexeme,
        cls=cls,
        features=features,
        children=tuple(_node(child) for child in elem),
        stuttered=stuttered == "true",
        **extras,
    )


def parse_dsynts(doc: str) -> list[UtterancePlan]:
    try:
        root = ET.fromstring(doc)
    except ET.ParseError as exc:
        raise DSyntSSchemaError(f"not well-formed XML: {exc}") from None
    if root.tag != "dsynts":
        raise DSyntSSchemaError(f"root element must be <dsynts>, found <{root.tag}>")
    plans = []
    for sentence in root:
        if sentence.tag != "sentence":
            raise DSyntSSchemaError(f"expected <sentence>, found <{sentence.tag}>")
        mode = sentence.get("mode", "narration")
        if mode not in MODES:
            raise DSyntSSchemaError(f"unknown sentence mode {mode!r}")
        try:
            a, b = sentence.get("span", "0.0").split(".")
            span = (int(a), int(b))
        except ValueError:
            raise DSyntSSchemaError(f"bad span {sentence.get('span')!r}") from None
        matrix, tree = None, None
        for child in sentence:
            if child.tag == "matrix":
                if matrix is not None or len(child) != 1:
                    raise DSyntSSchemaError("a sentence has at most one <matrix> holding one unit")
                matrix = _node(child[0])
            elif tree is None:
                tree = _node(child)
            else:
                raise DSyntSSchemaError("a sentence holds exactly one root unit")
        if tree is None:
            raise DSyntSSchemaError("sentence without a root unit")
        try:
            plans.append(UtterancePlan(tree, mode, sentence.get("speaker"), matrix, span))
        except TranslationError as exc:
            raise DSyntSSchemaError(str(exc)) from None
    return plans
