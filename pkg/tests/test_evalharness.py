import math
import random
from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from storyvoice.evalharness import (
    Normalization,
    bleu,
    frequencies_csv,
    levenshtein,
    load_labelled_words,
    load_normalizations,
    load_polarity_lexicon,
    normalize_golden,
    parse_polarity_lexicon,
    polarity,
    similarity,
    similarity_report,
    tokenize,
    word_frequencies,
)

from conftest import GOLDEN


def oracle_distance(a, b):
    """Edit distance straight from the recurrence, memoised."""

    @lru_cache(maxsize=None)
    def d(i, j):
        if i == 0:
            return j
        if j == 0:
            return i
        return min(d(i - 1, j) + 1, d(i, j - 1) + 1, d(i - 1, j - 1) + (a[i - 1] != b[j - 1]))

    return d(len(a), len(b))


@pytest.mark.parametrize("a, b, expected", [("abc", "abc", 0), ("kitten", "sitting", 3), ("", "abc", 3), ("abc", "", 3)])
def test_levenshtein_examples(a, b, expected):
    assert levenshtein(a, b) == expected == oracle_distance(a, b)


short = st.text(alphabet="abcde", max_size=12)


@given(short, short)
def test_levenshtein_matches_oracle(a, b):
    assert levenshtein(a, b) == oracle_distance(a, b)


@given(short, short, short)
def test_levenshtein_is_metric(a, b, c):
    assert levenshtein(a, b) >= 0
    assert (levenshtein(a, b) == 0) == (a == b)
    assert levenshtein(a, b) == levenshtein(b, a)
    assert levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c)


def test_similarity_bounds():
    assert similarity("", "") == 1.0
    assert similarity("abc", "xyz") == 0.0
    assert similarity("kitten", "sitting") == pytest.approx(1 - 3 / 7)


WORDS = [f"w{i}" for i in range(20)]


@pytest.mark.parametrize("position", range(3, 17))
def test_bleu_one_substitution(position):
    reference = " ".join(WORDS)
    candidate = " ".join("zz" if i == position else w for i, w in enumerate(WORDS))
    # p1..p4 = 19/20, 17/19, 15/18, 13/17; product 13/24; no brevity penalty
    assert bleu(candidate, reference) == pytest.approx((13 / 24) ** 0.25, abs=1e-9)


def test_bleu_brevity_penalty():
    reference = " ".join(WORDS)
    candidate = " ".join(WORDS[:10])
    assert bleu(candidate, reference) == pytest.approx(math.exp(1 - 20 / 10), abs=1e-12)


def test_bleu_identity_and_disjoint():
    text = "The fox said he saw the bird.\nThe cheese fell.\n"
    assert bleu(text, text) == 1.0
    assert bleu("alpha beta gamma delta", "one two three four") == 0.0


@given(st.lists(st.sampled_from(["the", "fox", "crow", "said", ".", "cheese"]), min_size=4, max_size=30))
def test_bleu_self_is_one(tokens):
    text = " ".join(tokens)
    assert bleu(text, text) == pytest.approx(1.0, abs=1e-12)


def test_bleu_errors():
    with pytest.raises(ValueError):
        bleu("", "something here")
    with pytest.raises(ValueError, match="segments"):
        bleu("a b c d\ne f g h", "a b c d")


def test_tokenize():
    assert tokenize('The fox said "you\'re so-somewhat wise!"') == [
        "the", "fox", "said", '"', "you're", "so-somewhat", "wise", "!", '"']


def test_similarity_report(tmp_path):
    ref = (GOLDEN / "fox_crow_monologic.txt").read_text(encoding="utf-8")
    report = similarity_report(ref, ref)
    assert report.exact_matches == 17 and report.bleu == 1.0 and report.min_similarity == 1.0
    assert "bleu=1.000000" in report.to_kv()
    assert report.to_text().splitlines()[-1] == "bleu=1.000000"
    with pytest.raises(ValueError):
        similarity_report("one line", "two\nlines")


# -- golden normalization -----------------------------------------------------------


@pytest.mark.parametrize("corpus", ["fox_crow_monologic", "fox_crow_dialogic"])
def test_golden_matches_normalized_raw_text(corpus):
    raw = (GOLDEN / f"{corpus}.raw.txt").read_text(encoding="utf-8")
    assert normalize_golden(corpus, raw) == (GOLDEN / f"{corpus}.txt").read_text(encoding="utf-8")


def test_normalization_row_must_match():
    row = Normalization("c", 1, "sang", "sing", "agreement")
    assert normalize_golden("c", "she was able to sang\n", [row]) == "she was able to sing\n"
    with pytest.raises(ValueError, match="not found"):
        normalize_golden("c", "nothing here\n", [row])
    with pytest.raises(ValueError, match="missing line"):
        normalize_golden("c", "", [row])


def test_normalization_table_loads():
    rows = load_normalizations()
    assert {r.corpus for r in rows} == {"fox_crow_monologic", "fox_crow_dialogic"}
    assert all(r.reason for r in rows)


# -- polarity ---------------------------------------------------------------------


def test_polarity_forced_by_lexicon():
    lex = parse_polarity_lexicon("wise\tpositive\ngullible\tnegative\n")
    report = polarity(["wise", "gullible"], lex)
    assert (report.positive, report.negative, report.neutral) == (50.0, 50.0, 0.0)


def test_polarity_empty():
    report = polarity([], parse_polarity_lexicon(""))
    assert report.empty and (report.positive, report.negative, report.neutral) == (0.0, 0.0, 0.0)
    assert "empty=true" in report.to_text()


def test_case_fold_and_lemma_fallback():
    lex = load_polarity_lexicon()
    assert lex.classify("SLY") == "negative"
    assert lex.classify("Cleverer") == "positive"
    assert lex.classify("silliest") == "negative"
    assert lex.classify("wiser") == "positive"
    assert lex.classify("purple") == "neutral"


def test_labelled_list_agreement():
    labelled = load_labelled_words()
    assert len(labelled) == 40
    report = polarity([w for w, _ in labelled])
    assert [label for _, label in report.classifications] == [label for _, label in labelled]
    for key in ("positive", "negative", "neutral"):
        expected = 100.0 * sum(label == key for _, label in labelled) / 40
        assert getattr(report, key) == pytest.approx(expected)


@settings(max_examples=200)
@given(st.lists(st.sampled_from(["wise", "sly", "Clever", "black", "foolish", "x", "smarter"]), max_size=50))
def test_polarity_sums_to_100(words):
    report = polarity(words)
    total = report.positive + report.negative + report.neutral
    if words:
        assert abs(total - 100.0) <= 0.5
        assert len(report.classifications) == len(words)
    else:
        assert report.empty and total == 0


def test_bad_polarity_lexicon():
    from storyvoice.evalharness import PolarityLexiconError

    with pytest.raises(PolarityLexiconError, match="unknown polarity"):
        parse_polarity_lexicon("wise\tgood\n")
    with pytest.raises(PolarityLexiconError, match="expected"):
        parse_polarity_lexicon("wise positive\n")


# -- frequencies ------------------------------------------------------------------


def test_frequencies_case_folded():
    assert word_frequencies(["sly", "Sly", "wise"]) == [("sly", 2), ("wise", 1)]
    assert word_frequencies([]) == []


def test_frequency_ties_alphabetical():
    assert word_frequencies(["b", "a", "c", "a", "b"]) == [("a", 2), ("b", 2), ("c", 1)]


def test_frequency_sum_property():
    rng = random.Random(11)
    vocab = [f"word{i}" for i in range(10)]
    words = [rng.choice(vocab) for _ in range(1000)]
    table = word_frequencies(words)
    assert sum(c for _, c in table) == 1000
    assert [c for _, c in table] == sorted((c for _, c in table), reverse=True)


def test_frequencies_csv():
    assert frequencies_csv([("sly", 2), ("wise", 1)]) == "word,count\nsly,2\nwise,1\n"


def test_plots_written(tmp_path):
    from storyvoice.plotting import plot_frequencies, plot_polarity, plot_similarity

    ref = (GOLDEN / "fox_crow_monologic.txt").read_text(encoding="utf-8")
    paths = [
        plot_similarity(similarity_report(ref, ref), tmp_path / "s.png"),
        plot_polarity(polarity(["wise", "sly"]), tmp_path / "p.png"),
        plot_frequencies(word_frequencies(["a", "b", "a"]), tmp_path / "f.png"),
    ]
    for path in paths:
        assert path.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
