"""Two-parameter Gamma model of word-length distributions.

The probability that a unique word has ``n`` letters is taken as
``p_n = C n**alpha exp(-beta n)``. In continuous mode ``C`` is the Gamma
density normalization ``beta**(alpha+1) / Gamma(alpha+1)``; in discrete mode
``C`` makes ``p_1 + ... + p_{n_max_eval}`` exactly one.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Iterable

import numpy as np
from scipy.optimize import least_squares, minimize
from scipy.special import gammaln, logsumexp

from .corpus import EmpiricalDistribution
from .errors import FitError

__all__ = [
    "GammaWordLengthModel",
    "LanguageProfile",
    "fit_gamma",
    "FitReport",
    "fit_gamma_report",
    "load_profiles",
    "bundled_profiles",
    "profile_by_name",
]

NORMALIZATIONS = ("continuous", "discrete")
ALPHA_BOUNDS = (1e-9, 20.0)
BETA_BOUNDS = (1e-9, 5.0)


@dataclass(frozen=True)
class GammaWordLengthModel:
    alpha: float
    beta: float
    n_max_eval: int = 100
    normalization_mode: str = "continuous"

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError(f"alpha and beta must be positive, got {self.alpha}, {self.beta}")
        if self.n_max_eval < 1:
            raise ValueError("n_max_eval must be a positive integer")
        if self.normalization_mode not in NORMALIZATIONS:
            raise ValueError(f"unknown normalization {self.normalization_mode!r}")

    def _log_shape(self, n):
        return self.alpha * np.log(n) - self.beta * n

    @cached_property
    def log_norm(self) -> float:
        """Natural log of the normalization constant ``C``."""
        if self.normalization_mode == "continuous":
            return (self.alpha + 1) * math.log(self.beta) - float(gammaln(self.alpha + 1))
        n = np.arange(1, self.n_max_eval + 1)
        return -float(logsumexp(self._log_shape(n)))

    def log_pmf(self, n):
        n_arr = np.asarray(n, dtype=float)
        if np.any(n_arr < 1):
            raise ValueError(f"word length must be >= 1, got {n}")
        out = self.log_norm + self._log_shape(n_arr)
        return float(out) if out.ndim == 0 else out

    def pmf(self, n):
        """``p_n`` for a length or an array of lengths."""
        out = np.exp(self.log_pmf(n))
        return float(out) if np.ndim(out) == 0 else out

    def tail_sum(self, m: int) -> float:
        """``p_m + p_{m+1} + ... + p_{n_max_eval}``."""
        if not 1 <= m <= self.n_max_eval:
            raise ValueError(f"m must lie in [1, {self.n_max_eval}], got {m}")
        return float(np.sum(self.pmf(np.arange(m, self.n_max_eval + 1))))

    def tail_sums(self) -> np.ndarray:
        """All tail sums; entry ``m - 1`` holds ``tail_sum(m)``."""
        p = self.pmf(np.arange(1, self.n_max_eval + 1))
        return np.cumsum(p[::-1])[::-1]

    def mean_length(self) -> float:
        return (self.alpha + 1) / self.beta

    def mode_length(self) -> int:
        # round half up
        return max(1, math.floor(self.alpha / self.beta + 0.5))

    def with_normalization(self, mode: str) -> "GammaWordLengthModel":
        return replace(self, normalization_mode=mode)


@dataclass(frozen=True)
class LanguageProfile:
    """Everything the recognition analyses need to know about one language."""

    name: str
    model: GammaWordLengthModel
    lexicon_size: int = 100_000
    sounds: int = 20
    epsilon: float = 1 / 20
    sound_letter_ratio: float = 1.0

    def __post_init__(self):
        if self.lexicon_size < 1:
            raise ValueError("lexicon_size must be >= 1")
        if not 0 < self.epsilon <= 1:
            raise ValueError("epsilon must lie in (0, 1]")
        if self.sounds < 2:
            raise ValueError("a language needs at least 2 sounds")
        if not 0 < self.sound_letter_ratio <= 1:
            raise ValueError("sound_letter_ratio must lie in (0, 1]")

    @property
    def alpha(self) -> float:
        return self.model.alpha

    @property
    def beta(self) -> float:
        return self.model.beta

    def log_words(self, n):
        """``ln(lexicon_size * p_n)``, the log number of words of length ``n``."""
        return math.log(self.lexicon_size) + self.model.log_pmf(n)

    def updated(self, **changes) -> "LanguageProfile":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "alpha": self.alpha,
            "beta": self.beta,
            "lexicon_size": self.lexicon_size,
            "sounds": self.sounds,
            "epsilon": self.epsilon,
            "ratio": self.sound_letter_ratio,
        }

    @classmethod
    def from_dict(cls, d: dict, defaults: dict | None = None, **model_kw) -> "LanguageProfile":
        merged = {**(defaults or {}), **d}
        try:
            model = GammaWordLengthModel(float(merged["alpha"]), float(merged["beta"]), **model_kw)
            return cls(
                name=str(merged["name"]),
                model=model,
                lexicon_size=int(merged.get("lexicon_size", 100_000)),
                sounds=int(merged.get("sounds", 20)),
                epsilon=float(merged.get("epsilon", 1 / 20)),
                sound_letter_ratio=float(merged.get("ratio", 1.0)),
            )
        except KeyError as exc:
            raise ValueError(f"profile is missing field {exc.args[0]!r}") from None


def load_profiles(path=None, **model_kw) -> list[LanguageProfile]:
    """Read a profiles JSON document.

    The document is either a list of profile objects or an object with a
    ``profiles`` list and optional ``defaults`` applied to every entry.
    Without ``path`` the bundled eight-language table is returned.
    """
    if path is None:
        text = resources.files("mishear").joinpath("data/profiles.json").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    doc = json.loads(text) if text.strip() else None
    if isinstance(doc, list):
        entries, defaults = doc, {}
    elif isinstance(doc, dict):
        entries, defaults = doc.get("profiles", []), doc.get("defaults", {})
    else:
        entries, defaults = [], {}
    if not entries:
        raise ValueError("profiles file contains no profiles")
    return [LanguageProfile.from_dict(e, defaults, **model_kw) for e in entries]


def bundled_profiles(**model_kw) -> list[LanguageProfile]:
    return load_profiles(None, **model_kw)


def profile_by_name(name: str, profiles: Iterable[LanguageProfile] | None = None) -> LanguageProfile:
    for prof in profiles if profiles is not None else bundled_profiles():
        if prof.name.lower() == name.lower():
            return prof
    raise KeyError(f"no profile named {name!r}")


@dataclass(frozen=True)
class FitReport:
    model: GammaWordLengthModel
    method: str
    residual_norm: float
    iterations: int
    lengths: np.ndarray = field(repr=False)
    empirical: np.ndarray = field(repr=False)
    fitted: np.ndarray = field(repr=False)


def _discrete_pmf(params, n, n_max_eval):
    alpha, beta = params
    grid = np.arange(1, n_max_eval + 1)
    log_norm = -logsumexp(alpha * np.log(grid) - beta * grid)
    return np.exp(log_norm + alpha * np.log(n) - beta * n)


def fit_gamma_report(
    dist: EmpiricalDistribution,
    n_max_eval: int = 100,
    normalization_mode: str = "continuous",
    method: str = "lsq",
    max_iter: int = 2000,
) -> FitReport:
    """Fit ``(alpha, beta)`` to an empirical length distribution.

    ``method="lsq"`` minimizes the squared difference between empirical and
    discrete-normalized model probabilities over the empirical support;
    ``method="mle"`` maximizes the multinomial log-likelihood instead. The
    returned model carries ``normalization_mode`` for later evaluation.
    """
    support = np.array([n for n in dist.support if n <= n_max_eval])
    if support.size < 3:
        raise FitError(f"need at least 3 distinct lengths, got {support.size}")
    emp = np.array([dist.probs[n] for n in support], dtype=float)

    alpha0 = 4.0
    n_peak = float(support[np.argmax(emp)])
    x0 = np.array([alpha0, np.clip(alpha0 / n_peak, 1e-3, BETA_BOUNDS[1])])
    lower = [ALPHA_BOUNDS[0], BETA_BOUNDS[0]]
    upper = [ALPHA_BOUNDS[1], BETA_BOUNDS[1]]

    if method == "lsq":
        res = least_squares(
            lambda x: emp - _discrete_pmf(x, support, n_max_eval),
            x0,
            bounds=(lower, upper),
            method="trf",
            gtol=1e-8,
            xtol=1e-10,
            ftol=None,
            max_nfev=max_iter,
        )
        converged = res.status > 0
        iterations = res.nfev
    elif method == "mle":
        res = minimize(
            lambda x: -np.sum(emp * np.log(_discrete_pmf(x, support, n_max_eval))),
            x0,
            method="L-BFGS-B",
            bounds=list(zip(lower, upper)),
            options={"gtol": 1e-10, "ftol": 1e-15, "maxiter": max_iter},
        )
        converged = res.success
        iterations = res.nit
    else:
        raise ValueError(f"unknown fit method {method!r}")

    alpha, beta = (float(v) for v in res.x)
    if not converged:
        raise FitError(f"optimizer did not converge: {res.message}", best=(alpha, beta))

    fitted = _discrete_pmf((alpha, beta), support, n_max_eval)
    return FitReport(
        model=GammaWordLengthModel(alpha, beta, n_max_eval, normalization_mode),
        method=method,
        residual_norm=float(np.linalg.norm(emp - fitted)),
        iterations=int(iterations),
        lengths=support,
        empirical=emp,
        fitted=fitted,
    )


def fit_gamma(dist: EmpiricalDistribution, **kw) -> GammaWordLengthModel:
    return fit_gamma_report(dist, **kw).model
