"""Reading word lists into length histograms of unique words."""

from __future__ import annotations

import csv
import io
import unicodedata
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import CorpusError

__all__ = [
    "LengthHistogram",
    "EmpiricalDistribution",
    "word_length",
    "parse_corpus",
    "read_corpus",
    "histogram_to_distribution",
]


@dataclass(frozen=True)
class LengthHistogram:
    """Counts of unique words per length."""

    counts: Mapping[int, int]
    total: int = field(init=False)
    n_max: int = field(init=False)

    def __post_init__(self):
        counts = {int(n): int(c) for n, c in sorted(self.counts.items()) if c}
        for n, c in counts.items():
            if n < 1:
                raise ValueError(f"length must be positive, got {n}")
            if c < 0:
                raise ValueError(f"negative count for length {n}")
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "total", sum(counts.values()))
        object.__setattr__(self, "n_max", max(counts, default=0))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["length", "count"])
        for n, c in self.counts.items():
            writer.writerow([n, c])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "LengthHistogram":
        reader = csv.DictReader(io.StringIO(text))
        return cls({int(row["length"]): int(row["count"]) for row in reader})


@dataclass(frozen=True)
class EmpiricalDistribution:
    probs: Mapping[int, float]

    @property
    def support(self) -> list[int]:
        return sorted(n for n, p in self.probs.items() if p > 0)


def _strip(word: str) -> str:
    decomposed = unicodedata.normalize("NFD", word)
    return "".join(
        ch for ch in decomposed if not ch.isspace() and not unicodedata.combining(ch)
    )


def word_length(word: str, allow_internal_space: bool = False) -> int:
    """Number of letters in ``word``.

    Letters are Unicode scalar values left after removing whitespace and
    combining marks, so a precomposed and a decomposed "naïve" both count 5.
    A word containing internal whitespace is rejected unless
    ``allow_internal_space`` is set, in which case the spaces are dropped.
    """
    trimmed = word.strip()
    if not trimmed:
        raise CorpusError("empty word")
    if not allow_internal_space and any(ch.isspace() for ch in trimmed):
        raise CorpusError(f"word contains whitespace: {word!r}")
    n = len(_strip(trimmed))
    if n == 0:
        raise CorpusError(f"word has no letters: {word!r}")
    return n


def parse_corpus(lines: Iterable[str], format: str = "plain") -> LengthHistogram:
    """Build the unique-word length histogram from corpus lines.

    Args:
        lines: text lines, one entry each. Blank lines are skipped.
        format: ``"plain"`` (one word per line) or ``"tsv"`` (``word<TAB>count``).
            Frequencies in tsv mode are validated but otherwise ignored, since
            each distinct word is counted once.

    Raises:
        CorpusError: on a malformed line (the error carries the 1-based line
            number) or when no words are found.
    """
    if format not in ("plain", "tsv"):
        raise ValueError(f"unknown corpus format {format!r}")
    seen: set[str] = set()
    counts: dict[int, int] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            continue
        if format == "tsv":
            parts = line.split("\t")
            if len(parts) != 2:
                raise CorpusError("expected 'word<TAB>count'", line=lineno)
            word, count = parts
            try:
                freq = int(count.strip())
            except ValueError:
                raise CorpusError(f"malformed count {count!r}", line=lineno) from None
            if freq < 1:
                raise CorpusError(f"count must be positive, got {freq}", line=lineno)
        else:
            word = line
        key = unicodedata.normalize("NFC", word.strip()).lower()
        if key in seen:
            continue
        try:
            n = word_length(key)
        except CorpusError as exc:
            raise CorpusError(str(exc), line=lineno) from None
        seen.add(key)
        counts[n] = counts.get(n, 0) + 1
    if not counts:
        raise CorpusError("empty corpus")
    return LengthHistogram(counts)


def read_corpus(path, format: str = "plain") -> LengthHistogram:
    with open(path, encoding="utf-8") as fh:
        return parse_corpus(fh, format=format)


def histogram_to_distribution(h: LengthHistogram) -> EmpiricalDistribution:
    if h.total <= 0:
        raise CorpusError("histogram is empty")
    return EmpiricalDistribution({n: c / h.total for n, c in h.counts.items()})
