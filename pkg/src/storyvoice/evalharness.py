"""String-similarity metrics and descriptive-word analysis.

BLEU here is corpus BLEU over line-aligned segments: clipped n-gram counts
for orders 1..4 are pooled across segments, combined with uniform weights
by geometric mean, and scaled by the brevity penalty. There is no
smoothing, so any zero precision gives 0.0. Tokens are lowercased words
(with internal hyphens and apostrophes) and single punctuation marks.
"""

from __future__ import annotations

import csv
import io
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

EVAL_DIR = Path(__file__).parent / "data" / "eval"

_TOKEN = re.compile(r"\w+(?:[-']\w+)*|[^\w\s]")
POLARITIES = ("positive", "negative", "neutral")


def levenshtein(a: str, b: str) -> int:
    """Unit-cost edit distance, two-row dynamic program."""
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def similarity(a: str, b: str) -> float:
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein(a, b) / longest


def tokenize(text: str) -> list[str]:
    return _TOKEN.findall(text.lower())


def _segments(text) -> list[str]:
    if isinstance(text, str):
        return [line for line in text.splitlines() if line.strip()]
    return [line for line in text if line.strip()]


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def bleu(candidate, reference, max_order: int = 4) -> float:
    """Corpus BLEU of ``candidate`` against a single ``reference``.

    Both arguments are texts (one segment per non-blank line) or lists of
    segments; the segment counts must agree.
    """
    cand_segs, ref_segs = _segments(candidate), _segments(reference)
    if not cand_segs or not ref_segs:
        raise ValueError("bleu needs non-empty candidate and reference texts")
    if len(cand_segs) != len(ref_segs):
        raise ValueError(
            f"candidate has {len(cand_segs)} segments but reference has {len(ref_segs)}"
        )
    matches = [0] * max_order
    totals = [0] * max_order
    cand_len = ref_len = 0
    for c_seg, r_seg in zip(cand_segs, ref_segs):
        c_tok, r_tok = tokenize(c_seg), tokenize(r_seg)
        cand_len += len(c_tok)
        ref_len += len(r_tok)
        for n in range(1, max_order + 1):
            c_ngrams, r_ngrams = _ngrams(c_tok, n), _ngrams(r_tok, n)
            matches[n - 1] += sum(min(k, r_ngrams[g]) for g, k in c_ngrams.items())
            totals[n - 1] += sum(c_ngrams.values())
    if cand_len == 0:
        raise ValueError("candidate text has no tokens")
    if min(matches) == 0:
        return 0.0
    log_p = sum(math.log(m / t) for m, t in zip(matches, totals)) / max_order
    bp = 1.0 if cand_len > ref_len else math.exp(1 - ref_len / cand_len)
    return bp * math.exp(log_p)


@dataclass(frozen=True)
class SentenceScore:
    candidate: str
    reference: str
    distance: int
    similarity: float

    @property
    def exact(self) -> bool:
        return self.distance == 0


@dataclass(frozen=True)
class SimilarityReport:
    sentences: tuple[SentenceScore, ...]
    bleu: float

    @property
    def exact_matches(self) -> int:
        return sum(s.exact for s in self.sentences)

    @property
    def min_similarity(self) -> float:
        return min((s.similarity for s in self.sentences), default=1.0)

    def to_text(self) -> str:
        lines = []
        for i, s in enumerate(self.sentences, 1):
            lines.append(f"{i:>3}  dist={s.distance:<4} sim={s.similarity:.4f}  {s.candidate}")
        lines.append(f"exact={self.exact_matches}/{len(self.sentences)}")
        lines.append(f"min_similarity={self.min_similarity:.4f}")
        lines.append(f"bleu={self.bleu:.6f}")
        return "\n".join(lines) + "\n"

    def to_kv(self) -> str:
        lines = [f"sentences={len(self.sentences)}"]
        for i, s in enumerate(self.sentences, 1):
            lines.append(f"sentence.{i}.distance={s.distance}")
            lines.append(f"sentence.{i}.similarity={s.similarity:.6f}")
        lines.append(f"exact_matches={self.exact_matches}")
        lines.append(f"min_similarity={self.min_similarity:.6f}")
        lines.append(f"bleu={self.bleu:.6f}")
        return "\n".join(lines) + "\n"


def similarity_report(candidate, reference) -> SimilarityReport:
    cand_segs, ref_segs = _segments(candidate), _segments(reference)
    if len(cand_segs) != len(ref_segs):
        raise ValueError(
            f"candidate has {len(cand_segs)} sentences but reference has {len(ref_segs)}"
        )
    scores = tuple(
        SentenceScore(c, r, levenshtein(c, r), similarity(c, r))
        for c, r in zip(cand_segs, ref_segs)
    )
    return SimilarityReport(scores, bleu(cand_segs, ref_segs))


# -- polarity ------------------------------------------------------------------


class PolarityLexiconError(ValueError):
    pass


_SUFFIXES = (("iest", "y"), ("ier", "y"), ("ily", "y"), ("est", ""), ("er", ""), ("ly", ""), ("s", ""))


def _lemmas(word: str):
    yield word
    for suffix, repl in _SUFFIXES:
        if word.endswith(suffix) and len(word) - len(suffix) >= 3:
            stem = word[: -len(suffix)]
            yield stem + repl
            if repl == "":
                yield stem + "e"
                if len(stem) >= 2 and stem[-1] == stem[-2]:
                    yield stem[:-1]


@dataclass(frozen=True)
class PolarityLexicon:
    entries: dict

    def classify(self, word: str) -> str:
        for lemma in _lemmas(word.strip().casefold()):
            if lemma in self.entries:
                return self.entries[lemma]
        return "neutral"


def parse_polarity_lexicon(text: str, source: str = "<lexicon>") -> PolarityLexicon:
    entries = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise PolarityLexiconError(f"{source}:{lineno}: expected 'word<TAB>polarity'")
        word, pol = parts[0].strip().casefold(), parts[1].strip()
        pol = {"+": "positive", "-": "negative", "0": "neutral"}.get(pol, pol)
        if pol not in POLARITIES:
            raise PolarityLexiconError(f"{source}:{lineno}: unknown polarity {parts[1]!r}")
        entries[word] = pol
    return PolarityLexicon(entries)


def load_polarity_lexicon(path=None) -> PolarityLexicon:
    path = Path(path) if path else EVAL_DIR / "polarity.tsv"
    return parse_polarity_lexicon(path.read_text(encoding="utf-8"), str(path))


@dataclass(frozen=True)
class PolarityReport:
    classifications: tuple[tuple[str, str], ...]
    positive: float
    negative: float
    neutral: float
    empty: bool = False
    counts: dict = field(default_factory=dict)

    def to_text(self) -> str:
        if self.empty:
            return "words=0\npositive=0.00\nnegative=0.00\nneutral=0.00\nempty=true\n"
        lines = [f"words={len(self.classifications)}"]
        for key in POLARITIES:
            lines.append(f"{key}={getattr(self, key):.2f}")
        lines += [f"word.{w}={c}" for w, c in self.classifications]
        return "\n".join(lines) + "\n"


def polarity(words, lexicon: PolarityLexicon | None = None) -> PolarityReport:
    """Classify words and report each polarity as a percentage of all words."""
    lexicon = lexicon or load_polarity_lexicon()
    labelled = tuple((w, lexicon.classify(w)) for w in words)
    if not labelled:
        return PolarityReport((), 0.0, 0.0, 0.0, empty=True, counts={p: 0 for p in POLARITIES})
    counts = Counter(label for _, label in labelled)
    total = len(labelled)
    pct = {p: 100.0 * counts[p] / total for p in POLARITIES}
    return PolarityReport(labelled, pct["positive"], pct["negative"], pct["neutral"], False,
                          {p: counts[p] for p in POLARITIES})


def load_labelled_words(path=None) -> list[tuple[str, str]]:
    path = Path(path) if path else EVAL_DIR / "labelled_words.tsv"
    out = []
    for line in path.read_text(encoding="utf-8").splitlines():
        if line.strip() and not line.startswith("#"):
            word, label = line.split("\t")
            out.append((word.strip(), label.strip()))
    return out


# -- frequencies -----------------------------------------------------------------


def word_frequencies(words) -> list[tuple[str, int]]:
    counts = Counter(w.casefold() for w in words)
    return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))


def frequencies_csv(table) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["word", "count"])
    writer.writerows(table)
    return buf.getvalue()


def read_words(text: str) -> list[str]:
    """Words from a file body: whitespace or comma separated."""
    return [w for w in re.split(r"[\s,]+", text) if w]


# -- golden files --------------------------------------------------------------

GOLDEN_DIR = Path(__file__).parent / "data" / "golden"


@dataclass(frozen=True)
class Normalization:
    corpus: str
    line: int
    raw: str
    normalized: str
    reason: str


def load_normalizations(path=None) -> list[Normalization]:
    path = Path(path) if path else GOLDEN_DIR / "normalization.tsv"
    out = []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not raw.strip() or raw.startswith("#"):
            continue
        parts = raw.split("\t")
        if len(parts) != 5:
            raise ValueError(f"{path}:{lineno}: expected 5 tab-separated fields")
        out.append(Normalization(parts[0], int(parts[1]), parts[2], parts[3], parts[4]))
    return out


def normalize_golden(corpus: str, raw_text: str, table=None) -> str:
    """Apply the corpus's rows of the normalization table to the raw text."""
    lines = raw_text.splitlines()
    for row in table if table is not None else load_normalizations():
        if row.corpus != corpus:
            continue
        if not 1 <= row.line <= len(lines):
            raise ValueError(f"{corpus}: normalization row for missing line {row.line}")
        if row.raw not in lines[row.line - 1]:
            raise ValueError(f"{corpus}:{row.line}: {row.raw!r} not found in raw text")
        lines[row.line - 1] = lines[row.line - 1].replace(row.raw, row.normalized)
    return "\n".join(lines) + "\n"
