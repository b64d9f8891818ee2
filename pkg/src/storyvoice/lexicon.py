"""Predicate-argument frames and English morphology.

Both tables are plain tab-separated files with a header row:

``frames.tsv``
    ``frame_id  lexeme  roles  complement  flags``. ``roles`` is a comma list
    of ``role:relation`` pairs in argument order, e.g.
    ``agent:subject,theme:object``. ``complement`` is one of ``none``,
    ``nominal``, ``sentential``. ``flags`` is a comma list drawn from
    ``communication``, ``cognition``, ``failed_to`` (or ``-``).

``morph.tsv``
    ``lexeme  past  third_singular  plural``; ``-`` marks a missing form.
    Only irregular words need an entry, regular morphology is derived.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

ROLES = ("agent", "theme", "recipient", "attribute")
RELATIONS = ("subject", "object", "indirect-object", "attribute", "adjunct")
COMPLEMENT_TYPES = ("none", "nominal", "sentential")
FLAGS = ("communication", "cognition", "failed_to")

DATA_DIR = Path(__file__).parent / "data" / "lexicon"


class LexiconError(Exception):
    pass


class UnknownFrameError(LexiconError, KeyError):
    def __str__(self):
        return f"unknown frame id {self.args[0]!r}"


@dataclass(frozen=True)
class VerbFrame:
    frame_id: str
    lexeme: str
    roles: tuple[tuple[str, str], ...]
    complement_type: str = "none"
    flags: frozenset[str] = frozenset()

    @property
    def communication_or_cognition(self) -> bool:
        return bool(self.flags & {"communication", "cognition"})

    @property
    def cognition(self) -> bool:
        return "cognition" in self.flags

    @property
    def role_names(self) -> tuple[str, ...]:
        return tuple(role for role, _ in self.roles)

    def relation(self, role: str) -> str | None:
        for name, rel in self.roles:
            if name == role:
                return rel
        return None


@dataclass(frozen=True)
class MorphEntry:
    lexeme: str
    past: str | None = None
    third_singular_present: str | None = None
    plural: str | None = None

    @property
    def irregular(self) -> bool:
        return (
            (self.past is not None and self.past != regular_past(self.lexeme))
            or (
                self.third_singular_present is not None
                and self.third_singular_present != regular_third_singular(self.lexeme)
            )
            or (self.plural is not None and self.plural != regular_plural(self.lexeme))
        )


_VOWELS = "aeiou"


def _sibilant(word: str) -> bool:
    return word.endswith(("s", "x", "z", "ch", "sh", "o"))


def regular_past(word: str) -> str:
    if word.endswith("e"):
        return word + "d"
    if len(word) > 1 and word.endswith("y") and word[-2] not in _VOWELS:
        return word[:-1] + "ied"
    # single-syllable CVC doubles its final consonant: stop -> stopped
    if (
        re.fullmatch(r"[^aeiou]*[aeiou][^aeiouwxy]", word)
        and len(word) <= 4
    ):
        return word + word[-1] + "ed"
    return word + "ed"


def regular_third_singular(word: str) -> str:
    if len(word) > 1 and word.endswith("y") and word[-2] not in _VOWELS:
        return word[:-1] + "ies"
    if _sibilant(word):
        return word + "es"
    return word + "s"


def regular_plural(word: str) -> str:
    if len(word) > 1 and word.endswith("y") and word[-2] not in _VOWELS:
        return word[:-1] + "ies"
    if word.endswith(("s", "x", "z", "ch", "sh")):
        return word + "es"
    return word + "s"


_BE_PRESENT = {("1", "sg"): "am", ("3", "sg"): "is"}
_BE_PAST = {("1", "sg"): "was", ("3", "sg"): "was"}


class Lexicon:
    """Frame and morphology tables, immutable once loaded."""

    def __init__(self, frames, morph):
        self._frames = {f.frame_id: f for f in frames}
        self._by_lexeme = {}
        for f in frames:
            self._by_lexeme.setdefault(f.lexeme, f)
        self._morph = {m.lexeme: m for m in morph}

    @classmethod
    def load(cls, directory: str | Path | None = None) -> "Lexicon":
        directory = Path(directory) if directory else DATA_DIR
        return cls(
            load_frames(directory / "frames.tsv"),
            load_morph(directory / "morph.tsv"),
        )

    def __contains__(self, frame_id: str) -> bool:
        return frame_id in self._frames

    @property
    def frame_ids(self) -> tuple[str, ...]:
        return tuple(self._frames)

    def lookup_frame(self, frame_id: str) -> VerbFrame:
        try:
            return self._frames[frame_id]
        except KeyError:
            raise UnknownFrameError(frame_id) from None

    def frame_for_lexeme(self, lexeme: str) -> VerbFrame | None:
        return self._by_lexeme.get(lexeme)

    def morph(self, lexeme: str) -> MorphEntry | None:
        return self._morph.get(lexeme)

    def past(self, lexeme: str) -> str:
        entry = self._morph.get(lexeme)
        if entry and entry.past:
            return entry.past
        return regular_past(lexeme)

    def third_singular(self, lexeme: str) -> str:
        entry = self._morph.get(lexeme)
        if entry and entry.third_singular_present:
            return entry.third_singular_present
        return regular_third_singular(lexeme)

    def plural(self, lexeme: str) -> str:
        entry = self._morph.get(lexeme)
        if entry and entry.plural:
            return entry.plural
        # multiword heads inflect their last word
        head, _, last = lexeme.rpartition(" ")
        return (head + " " if head else "") + regular_plural(last)

    def inflect(self, lexeme: str, tense: str | None = None, person="3", number="sg") -> str:
        """Inflect a verb for tense, person and number.

        ``tense`` of None, ``"base"`` or ``"inf"`` returns the lexeme unchanged.
        ``"future"`` yields the periphrastic ``will`` form.
        """
        person = str(person)
        if tense in (None, "base", "inf"):
            return lexeme
        if tense == "future":
            return "will " + lexeme
        if lexeme == "be":
            table = _BE_PRESENT if tense == "present" else _BE_PAST
            default = "are" if tense == "present" else "were"
            return table.get((person, number), default)
        if tense == "past":
            return self.past(lexeme)
        if tense == "present":
            if person == "3" and number == "sg":
                return self.third_singular(lexeme)
            return lexeme
        raise LexiconError(f"unknown tense {tense!r}")


def _rows(path: Path, header: tuple[str, ...]):
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter="\t")
        first = next(reader, None)
        if first is None or tuple(first) != header:
            raise LexiconError(f"{path}: expected header row {list(header)}")
        for lineno, row in enumerate(reader, start=2):
            if not row or row[0].startswith("#"):
                continue
            if len(row) != len(header):
                raise LexiconError(f"{path}:{lineno}: expected {len(header)} columns")
            yield lineno, row


def load_frames(path: str | Path) -> list[VerbFrame]:
    path = Path(path)
    frames = []
    for lineno, (frame_id, lexeme, roles, complement, flags) in _rows(
        path, ("frame_id", "lexeme", "roles", "complement", "flags")
    ):
        pairs = []
        for item in roles.split(","):
            role, _, rel = item.partition(":")
            if role not in ROLES or rel not in RELATIONS:
                raise LexiconError(f"{path}:{lineno}: bad role mapping {item!r}")
            pairs.append((role, rel))
        if complement not in COMPLEMENT_TYPES:
            raise LexiconError(f"{path}:{lineno}: bad complement type {complement!r}")
        flag_set = frozenset() if flags == "-" else frozenset(flags.split(","))
        if not flag_set <= set(FLAGS):
            raise LexiconError(f"{path}:{lineno}: unknown flags {sorted(flag_set - set(FLAGS))}")
        frames.append(VerbFrame(frame_id, lexeme, tuple(pairs), complement, flag_set))
    return frames


def load_morph(path: str | Path) -> list[MorphEntry]:
    path = Path(path)

    def opt(value):
        return None if value == "-" else value

    return [
        MorphEntry(lexeme, opt(past), opt(third), opt(plural))
        for _, (lexeme, past, third, plural) in _rows(
            path, ("lexeme", "past", "third_singular", "plural")
        )
    ]


@lru_cache(maxsize=None)
def _bundled() -> Lexicon:
    return Lexicon.load()


def default_lexicon() -> Lexicon:
    return _bundled()
