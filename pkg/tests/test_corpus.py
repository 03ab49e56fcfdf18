import pytest
from hypothesis import given, strategies as st

from mishear.corpus import (
    LengthHistogram,
    histogram_to_distribution,
    parse_corpus,
    word_length,
)
from mishear.errors import CorpusError


def test_plain_lines():
    h = parse_corpus(["cat", "house", "dog"])
    assert h.counts == {3: 2, 5: 1}
    assert h.total == 3
    assert h.n_max == 5


def test_tsv_duplicates_collapse():
    h = parse_corpus(["cat\t10", "cat\t5", "at\t7"], format="tsv")
    assert h.counts == {3: 1, 2: 1}
    assert h.total == 2


def test_case_folding_dedupes():
    assert parse_corpus(["The", "the", "THE"]).total == 1


@pytest.mark.parametrize("line", ["cat\tten", "cat\t0", "cat", "cat\t1\t2"])
def test_malformed_tsv_names_line(line):
    with pytest.raises(CorpusError, match="line 2"):
        parse_corpus(["dog\t3", line], format="tsv")


def test_empty_corpus():
    with pytest.raises(CorpusError, match="empty corpus"):
        parse_corpus(["", "   "])


def test_word_length_basic():
    assert word_length("cat") == 3
    assert word_length("  cat \n") == 3


def test_word_length_combining_marks():
    decomposed = "naïve"
    assert len(decomposed) == 6
    assert word_length(decomposed) == 5
    assert word_length("naïve") == 5


def test_word_length_internal_space_policy():
    with pytest.raises(CorpusError):
        word_length("a b")
    assert word_length("a b", allow_internal_space=True) == 2


def test_word_length_empty():
    with pytest.raises(CorpusError):
        word_length("   ")


@pytest.mark.parametrize("n", [1, 2, 50, 100])
def test_word_length_repeated(n):
    assert word_length("x" * n) == n


def test_distribution():
    d = histogram_to_distribution(LengthHistogram({3: 2, 5: 1}))
    assert d.probs == pytest.approx({3: 2 / 3, 5: 1 / 3})
    assert histogram_to_distribution(LengthHistogram({4: 9})).probs == {4: 1.0}


def test_distribution_of_empty_histogram():
    with pytest.raises(CorpusError):
        histogram_to_distribution(LengthHistogram({}))


def test_csv_round_trip():
    h = LengthHistogram({3: 2, 5: 1})
    text = h.to_csv()
    assert text.splitlines()[0] == "length,count"
    assert LengthHistogram.from_csv(text) == h


words = st.lists(st.text(alphabet="abcdefghij", min_size=1, max_size=12), min_size=1)


@given(words)
def test_idempotent_over_duplicates(ws):
    assert parse_corpus(ws) == parse_corpus(ws + ws)


@given(st.dictionaries(st.integers(1, 60), st.integers(1, 10_000), min_size=1))
def test_distribution_sums_to_one(counts):
    d = histogram_to_distribution(LengthHistogram(counts))
    assert abs(sum(d.probs.values()) - 1.0) <= 1e-12
