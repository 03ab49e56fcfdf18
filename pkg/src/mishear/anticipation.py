"""Word anticipation with and without mishearings.

After hearing the first ``m`` sounds of a word, the mean number of lexicon
words still compatible with that prefix is

    f_m = (epsilon / p_m) * sum_{n >= m} p_n

where ``epsilon`` is the chance that a prefix is itself a word. With ``k``
mishearings in the prefix this grows to ``2**k f_m``, and averaging over the
binomial number of mishearings gives ``(1 + q)**m f_m``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from ._io import rows_to_csv
from .errors import NoCrossingError
from .static import effective_exponent
from .variants import kappa
from .wordlength import LanguageProfile

__all__ = [
    "AnticipationAnalysis",
    "Threshold",
    "prefix_cohort",
    "prefix_cohorts",
    "anticipation_length",
    "misheard_cohort",
    "mean_misheard_cohort",
    "mishearing_threshold",
    "hammock_rows",
    "hammock_export",
    "gbar_rows",
    "gbar_export",
    "anticipation_analysis",
]

LN2 = math.log(2.0)


def prefix_cohorts(profile: LanguageProfile) -> np.ndarray:
    """``f_m`` for ``m = 1 .. n_max_eval`` (entry ``m - 1``)."""
    model = profile.model
    p = model.pmf(np.arange(1, model.n_max_eval + 1))
    return profile.epsilon * model.tail_sums() / p


def _log_cohorts(profile):
    return np.log(prefix_cohorts(profile))


def prefix_cohort(profile: LanguageProfile, m: int) -> float:
    model = profile.model
    if not 1 <= m <= model.n_max_eval:
        raise ValueError(f"prefix length must lie in [1, {model.n_max_eval}], got {m}")
    return profile.epsilon * model.tail_sum(m) / model.pmf(m)


def anticipation_length(profile: LanguageProfile) -> int:
    """Smallest prefix length at which the mean cohort drops to one word or fewer."""
    f = prefix_cohorts(profile)
    below = np.nonzero(f <= 1.0)[0]
    if below.size == 0:
        raise NoCrossingError(f"cohort never drops to one word for {profile.name}")
    return int(below[0]) + 1


def misheard_cohort(profile: LanguageProfile, m: int, k: int) -> float:
    if not 0 <= k <= m:
        raise ValueError(f"number of mishearings must lie in [0, {m}], got {k}")
    return 2.0**k * prefix_cohort(profile, m)


def mean_misheard_cohort(profile: LanguageProfile, q: float, m: int) -> float:
    return math.exp(kappa(q) * m) * prefix_cohort(profile, m)


def _log_gbar(profile, q, log_f=None):
    if log_f is None:
        log_f = _log_cohorts(profile)
    m = np.arange(1, log_f.size + 1)
    return kappa(q) * m + log_f


@dataclass(frozen=True)
class Threshold:
    q_th: float
    m_th: int
    delta_th: float


def mishearing_threshold(profile: LanguageProfile, xtol: float = 1e-12) -> Threshold:
    """Mishearing probability at which the minimum of ``(1+q)**m f_m`` over ``m`` reaches one.

    The minimum is strictly increasing in ``q``, so it is bracketed on
    ``[0, 1]`` and bisected. ``m_th`` is the smallest minimizing prefix
    length at the threshold.
    """
    log_f = _log_cohorts(profile)

    def excess(q):
        return float(np.min(_log_gbar(profile, q, log_f)))

    if excess(0.0) >= 0.0:
        raise NoCrossingError(f"no anticipation without mishearings for {profile.name}")
    if excess(1.0) <= 0.0:
        raise NoCrossingError(f"anticipation survives every mishearing rate for {profile.name}")
    q_th = bisect(excess, 0.0, 1.0, xtol=xtol)
    m_th = int(np.argmin(_log_gbar(profile, q_th, log_f))) + 1
    return Threshold(q_th, m_th, effective_exponent(profile, q_th, m_th))


def hammock_rows(profile: LanguageProfile, m_max: int) -> list[tuple[int, int, float]]:
    """``(m, k, ln g_{m,k})`` for ``1 <= m <= m_max`` and ``0 <= k <= m``."""
    log_f = _log_cohorts(profile)
    if not 1 <= m_max <= log_f.size:
        raise ValueError(f"m_max must lie in [1, {log_f.size}]")
    return [
        (m, k, k * LN2 + float(log_f[m - 1]))
        for m in range(1, m_max + 1)
        for k in range(m + 1)
    ]


def hammock_export(profile: LanguageProfile, m_max: int) -> str:
    return rows_to_csv(["m", "k", "ln_g"], hammock_rows(profile, m_max))


def gbar_rows(profile: LanguageProfile, qs, m_max: int) -> list[tuple[float, int, float]]:
    log_f = _log_cohorts(profile)[:m_max]
    rows = []
    for q in qs:
        lg = _log_gbar(profile, q, log_f)
        rows.extend((float(q), m, float(lg[m - 1])) for m in range(1, m_max + 1))
    return rows


def gbar_export(profile: LanguageProfile, qs, m_max: int) -> str:
    return rows_to_csv(["q", "m", "ln_gbar"], gbar_rows(profile, qs, m_max))


@dataclass(frozen=True)
class AnticipationAnalysis:
    f_series: dict[int, float]
    m_ant: int
    g_matrix: dict[tuple[int, int], float]
    threshold: Threshold
    g_bar_at_threshold: dict[int, float]

    def g_bar_series(self, q: float) -> dict[int, float]:
        return {m: math.exp(kappa(q) * m) * f for m, f in self.f_series.items()}


def anticipation_analysis(profile: LanguageProfile, m_max: int | None = None) -> AnticipationAnalysis:
    f = prefix_cohorts(profile)
    m_max = m_max or profile.model.n_max_eval
    f_series = {m: float(f[m - 1]) for m in range(1, m_max + 1)}
    g = {(m, k): 2.0**k * fm for m, fm in f_series.items() for k in range(m + 1)}
    th = mishearing_threshold(profile)
    k_th = kappa(th.q_th)
    g_bar = {m: math.exp(k_th * m) * fm for m, fm in f_series.items()}
    return AnticipationAnalysis(f_series, anticipation_length(profile), g, th, g_bar)
