"""Static easy-to-hard analysis.

For a word of length ``n`` the effective exponent compares the log mean
number of variants, ``kappa * n``, with the log number of words of that
length, ``ln(lexicon_size * p_n)``. Recognition becomes hard at the first
length where the exponent reaches one.
"""

from __future__ import annotations

from dataclasses import dataclass

from ._io import rows_to_csv
from .errors import NoCrossingError, SupportError
from .variants import kappa
from .wordlength import LanguageProfile

__all__ = [
    "StaticAnalysis",
    "effective_exponent",
    "delta_star",
    "static_crossover",
    "static_analysis",
]


def effective_exponent(profile: LanguageProfile, q: float, n: int) -> float:
    if n < 1:
        raise ValueError("n must be >= 1")
    log_w = profile.log_words(n)
    if log_w <= 0:
        raise SupportError(f"beyond lexicon support: lexicon_size * p_{n} <= 1 for {profile.name}")
    return kappa(q) * n / log_w


def delta_star(profile: LanguageProfile, q: float) -> float:
    """Effective exponent at the most probable word length."""
    return effective_exponent(profile, q, profile.model.mode_length())


def static_crossover(profile: LanguageProfile, q: float, start: int | None = None) -> int:
    """First length ``n >= start`` with effective exponent ``>= 1``.

    The scan starts at the most probable length by default. Below it, for
    long-word languages, ``lexicon_size * p_n`` drops under one at small ``n``
    and the exponent has a spurious pole unrelated to the crossover.
    """
    if q <= 0:
        raise NoCrossingError("no static crossover without mishearings")
    n = profile.model.mode_length() if start is None else start
    while True:
        try:
            if effective_exponent(profile, q, n) >= 1.0:
                return n
        except SupportError:
            raise NoCrossingError(
                f"no static crossover in support for {profile.name} (pole reached at n={n})"
            ) from None
        n += 1


@dataclass(frozen=True)
class StaticAnalysis:
    delta_series: dict[int, float]
    delta_star: float
    n_star: int
    n_st: int

    def to_csv(self) -> str:
        return rows_to_csv(["n", "delta_n"], self.delta_series.items())


def static_analysis(profile: LanguageProfile, q: float, n_max: int | None = None) -> StaticAnalysis:
    """Effective exponents for ``n = 1 .. n_max`` (default ``n_st``), skipping lengths outside the support."""
    n_star = profile.model.mode_length()
    n_st = static_crossover(profile, q)
    series = {}
    for n in range(1, (n_max or n_st) + 1):
        try:
            series[n] = effective_exponent(profile, q, n)
        except SupportError:
            continue
    return StaticAnalysis(series, delta_star(profile, q), n_star, n_st)
