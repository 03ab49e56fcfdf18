"""Mishearing rules and the statistics of word variants.

A word is a tuple of integer sound identifiers in ``[0, nu)``. Each sound is
misheard independently with probability ``q``, and a misheard sound is always
replaced by the same alteration ``phi(sound)``.
"""

from __future__ import annotations

import itertools
import math
from typing import Callable, Iterable, Sequence

from scipy.stats import binom

__all__ = [
    "SoundString",
    "ShiftAlteration",
    "validate_word",
    "mishearing_count_pmf",
    "kappa",
    "kappa_bar",
    "lambda_moment",
    "average_variants",
    "moment_variants",
    "delta_exponent",
    "enumerate_variants",
]

SoundString = tuple[int, ...]


class ShiftAlteration:
    """The alteration ``sound -> (sound + shift) mod nu``; fixed-point free for ``shift % nu != 0``."""

    def __init__(self, nu: int, shift: int = 1):
        if nu < 2:
            raise ValueError("need at least two sounds")
        if shift % nu == 0:
            raise ValueError("shift must not be a multiple of nu")
        self.nu = nu
        self.shift = shift

    def __call__(self, sound: int) -> int:
        return (sound + self.shift) % self.nu

    def __repr__(self):
        return f"ShiftAlteration(nu={self.nu}, shift={self.shift})"


def validate_word(word: Sequence[int], nu: int) -> SoundString:
    word = tuple(int(s) for s in word)
    if not word:
        raise ValueError("a word has at least one sound")
    if any(not 0 <= s < nu for s in word):
        raise ValueError(f"sound identifiers must lie in [0, {nu})")
    return word


def _check_q(q):
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"mishearing probability must lie in [0, 1], got {q}")


def mishearing_count_pmf(n: int, q: float, k: int) -> float:
    """Probability of exactly ``k`` mishearings in a word of ``n`` sounds."""
    _check_q(q)
    if not 0 <= k <= n:
        raise ValueError(f"k must lie in [0, {n}], got {k}")
    return float(binom.pmf(k, n, q))


def kappa(q: float) -> float:
    """Growth rate of the mean number of variants, ``ln(1 + q)``."""
    _check_q(q)
    return math.log1p(q)


def kappa_bar(q: float) -> float:
    """Growth rate of the typical (geometric-mean) number of variants, ``q ln 2``."""
    _check_q(q)
    return q * math.log(2.0)


def lambda_moment(s: float, q: float) -> float:
    """Growth rate of the ``s``-th moment of the variant count, ``ln(1 + (2**s - 1) q)``."""
    _check_q(q)
    return math.log1p(math.expm1(s * math.log(2.0)) * q)


def average_variants(n: int, q: float) -> float:
    if n < 1:
        raise ValueError("n must be >= 1")
    return math.exp(kappa(q) * n)


def moment_variants(n: int, q: float, s: float) -> float:
    if n < 1:
        raise ValueError("n must be >= 1")
    return math.exp(lambda_moment(s, q) * n)


def delta_exponent(q: float, nu: int) -> float:
    """Scaling exponent relating variants to words in an unconstrained lexicon."""
    if nu < 2:
        raise ValueError("nu must be >= 2")
    return kappa(q) / math.log(nu)


def enumerate_variants(
    word: Sequence[int],
    misheard_positions: Iterable[int],
    phi: Callable[[int], int],
) -> set[SoundString]:
    """All strings heard when the given positions (1-based) may each be altered.

    Every position in ``misheard_positions`` independently keeps its sound or
    takes ``phi`` of it, giving ``2**k`` distinct variants.
    """
    word = tuple(word)
    positions = sorted(set(misheard_positions))
    for i in positions:
        if not 1 <= i <= len(word):
            raise ValueError(f"position {i} outside 1..{len(word)}")
        if phi(word[i - 1]) == word[i - 1]:
            raise ValueError(f"alteration has a fixed point at sound {word[i - 1]}")
    choices = [
        (s, phi(s)) if i in positions else (s,)
        for i, s in enumerate(word, start=1)
    ]
    return set(itertools.product(*choices))
