"""Binary chains with cluster weights and the dynamical crossover.

Each site of a chain of ``n`` sites is misheard (occupied) with probability
``q`` and heard correctly (empty) with probability ``p = 1 - q``. A maximal
run of ``k`` occupied sites carries the weight ``lambda_k``. The partition
function ``Z_n`` sums, over all ``2**n`` configurations, the site probability
times the product of cluster weights.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import bisect
from scipy.special import gammaln, logsumexp

from ._io import rows_to_csv
from .errors import NoCrossingError, SupportError
from .static import static_crossover
from .wordlength import LanguageProfile

__all__ = [
    "ClusterWeights",
    "PartitionResult",
    "DynamicAnalysis",
    "cluster_weight",
    "partition_function",
    "brute_force_partition",
    "generating_series_coefficients",
    "extensive_free_energy",
    "free_energy_density",
    "dynamical_exponent",
    "dynamical_crossover",
    "critical_mu",
    "dynamic_analysis",
    "kn_rows",
    "statdyn_rows",
]

KINDS = ("exponential", "linear", "quadratic", "factorial", "custom")


@dataclass(frozen=True)
class ClusterWeights:
    """A family of cluster weights ``lambda_k``.

    ``exponential``: ``mu**k``; ``linear``: ``a k``; ``quadratic``: ``b k**2``;
    ``factorial``: ``mu**k k!``; ``custom``: explicit ``(lambda_1, ..., lambda_K)``.
    """

    kind: str
    param: float = 1.0
    table: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown weight family {self.kind!r}")
        if self.kind == "custom":
            if not self.table or any(w <= 0 for w in self.table):
                raise ValueError("custom weights must be a non-empty table of positive numbers")
            object.__setattr__(self, "table", tuple(float(w) for w in self.table))
        elif not self.param > 0:
            raise ValueError("weight parameter must be positive")

    @classmethod
    def exponential(cls, mu):
        return cls("exponential", mu)

    @classmethod
    def linear(cls, a):
        return cls("linear", a)

    @classmethod
    def quadratic(cls, b):
        return cls("quadratic", b)

    @classmethod
    def factorial(cls, mu):
        return cls("factorial", mu)

    @classmethod
    def custom(cls, table: Sequence[float]):
        return cls("custom", 1.0, tuple(table))

    def log_weights(self, k_max: int) -> np.ndarray:
        """``ln lambda_k`` for ``k = 1 .. k_max``."""
        k = np.arange(1, k_max + 1, dtype=float)
        if self.kind == "exponential":
            return k * math.log(self.param)
        if self.kind == "linear":
            return math.log(self.param) + np.log(k)
        if self.kind == "quadratic":
            return math.log(self.param) + 2 * np.log(k)
        if self.kind == "factorial":
            return k * math.log(self.param) + gammaln(k + 1)
        if k_max > len(self.table):
            raise ValueError(f"custom table has {len(self.table)} weights, {k_max} needed")
        return np.log(np.array(self.table[:k_max]))

    def weights(self, k_max: int) -> np.ndarray:
        return np.exp(self.log_weights(k_max))

    def __str__(self):
        if self.kind == "custom":
            return "custom(" + ",".join(f"{w:g}" for w in self.table) + ")"
        return f"{self.kind}({self.param:g})"


def cluster_weight(scheme: ClusterWeights, k: int) -> float:
    if k < 1:
        raise ValueError("cluster size must be >= 1")
    return float(math.exp(scheme.log_weights(k)[-1]))


def _check_q(q):
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q must lie in [0, 1], got {q}")


@dataclass(frozen=True)
class PartitionResult:
    """Log partition sums for chain lengths ``1 .. n``; entry ``i`` is length ``i + 1``."""

    log_Z_empty_start: np.ndarray
    log_Z_occupied_start: np.ndarray
    log_Z: np.ndarray
    K: np.ndarray

    @property
    def n(self) -> int:
        return self.log_Z.size

    def log_z(self, n: int) -> float:
        return float(self.log_Z[n - 1])

    def free_energy(self, n: int) -> float:
        return float(self.K[n - 1])


def partition_function(n: int, q: float, scheme: ClusterWeights) -> PartitionResult:
    """Solve the two-term recursion for ``Z_n`` in log space.

    ``Z_n^o`` (leftmost site empty) and ``Z_n^*`` (leftmost site occupied)
    are built by peeling off the leftmost run of ``m`` sites::

        Z_n^o = p**n + sum_{m<n} p**m Z_{n-m}^*
        Z_n^* = lambda_n q**n + sum_{m<n} lambda_m q**m Z_{n-m}^o

    Cost is O(n**2).
    """
    if n < 1:
        raise ValueError("chain length must be >= 1")
    _check_q(q)
    lengths = np.arange(1, n + 1)
    log_lam = scheme.log_weights(n)
    empty = np.full(n, -np.inf)
    occupied = np.full(n, -np.inf)
    if q == 0.0:
        empty[:] = 0.0
    elif q == 1.0:
        occupied[:] = log_lam
    else:
        run_empty = lengths * math.log1p(-q)
        run_occ = log_lam + lengths * math.log(q)
        for i in range(n):
            # runs of length m = 1..i followed by a chain of length i + 1 - m
            rest_occ = occupied[:i][::-1]
            rest_empty = empty[:i][::-1]
            empty[i] = logsumexp(np.append(run_empty[:i] + rest_occ, run_empty[i]))
            occupied[i] = logsumexp(np.append(run_occ[:i] + rest_empty, run_occ[i]))
    log_z = np.logaddexp(empty, occupied)
    return PartitionResult(empty, occupied, log_z, log_z / lengths)


def brute_force_partition(n: int, q: float, scheme: ClusterWeights) -> float:
    """``Z_n`` by explicit enumeration of all ``2**n`` occupancy strings."""
    if n > 20:
        raise ValueError("brute force enumeration is limited to n <= 20")
    if n < 1:
        raise ValueError("chain length must be >= 1")
    _check_q(q)
    lam = [float(w) for w in scheme.weights(n)]
    p = 1.0 - q
    total = 0.0
    for config in itertools.product((0, 1), repeat=n):
        weight = 1.0
        for occupied, run in itertools.groupby(config):
            size = len(list(run))
            weight *= q**size * lam[size - 1] if occupied else p**size
        total += weight
    return total


def generating_series_coefficients(order: int, q: float, scheme: ClusterWeights) -> np.ndarray:
    """Coefficients ``Z_1 .. Z_order`` read off the power series of the closed form

        G(z) = (p z + (1 + p z) L(z)) / (1 - p z (1 + L(z))),  L(z) = sum_k lambda_k q**k z**k.
    """
    _check_q(q)
    p = 1.0 - q
    size = order + 1
    lz = np.zeros(size)
    lz[1:] = scheme.weights(order) * q ** np.arange(1, size)
    pz = np.zeros(size)
    pz[1] = p
    one = np.zeros(size)
    one[0] = 1.0
    num = pz + lz + np.convolve(pz, lz)[:size]
    den = one - np.convolve(pz, one + lz)[:size]
    g = np.zeros(size)
    for j in range(size):
        g[j] = num[j] - np.dot(den[1 : j + 1], g[j - 1 :: -1][:j]) if j else num[0]
    return g[1:]


def extensive_free_energy(q: float, scheme: ClusterWeights, xtol: float = 1e-12) -> float:
    """Free energy per site ``K = -ln z*`` for exponentially bounded weights.

    ``z*`` is the smallest positive zero of the denominator of the generating
    series. For exponential weights it is ``1 / (p + mu q)``; for linear and
    quadratic weights it is the root on ``(0, 1/q)`` of a cubic and a quartic,
    found by bisection.
    """
    _check_q(q)
    p = 1.0 - q
    if scheme.kind == "exponential":
        return math.log(p + scheme.param * q)
    if scheme.kind not in ("linear", "quadratic"):
        raise ValueError(f"no finite free energy density for {scheme.kind} weights")
    if q == 0.0:
        return 0.0
    if q == 1.0:
        return 0.0
    c = scheme.param
    if scheme.kind == "linear":
        def denom(z):
            return (1 - p * z) * (1 - q * z) ** 2 - c * p * q * z**2
    else:
        def denom(z):
            return (1 - p * z) * (1 - q * z) ** 3 - c * p * q * z**2 * (1 + q * z)
    hi = 1.0 / q
    if not denom(hi) < 0:
        raise NoCrossingError("denominator has no root in (0, 1/q)")
    z_star = bisect(denom, 0.0, hi, xtol=xtol * 1e-3, rtol=4 * np.finfo(float).eps, maxiter=500)
    return -math.log(z_star)


def free_energy_density(n: int, q: float, scheme: ClusterWeights) -> float:
    return partition_function(n, q, scheme).free_energy(n)


def dynamical_exponent(
    profile: LanguageProfile, q: float, mu: float, n: int, partition: PartitionResult | None = None
) -> float:
    """``ln Z_n / ln(lexicon_size p_n)`` with factorial cluster weights ``mu**k k!``."""
    log_w = profile.log_words(n)
    if log_w <= 0:
        raise SupportError(f"beyond lexicon support: lexicon_size * p_{n} <= 1 for {profile.name}")
    if partition is None or partition.n < n:
        partition = partition_function(n, q, ClusterWeights.factorial(mu))
    return partition.log_z(n) / log_w


def _scan_start(profile):
    return max(1, math.floor(profile.model.mean_length() + 0.5))


def dynamical_crossover(
    profile: LanguageProfile, q: float, mu: float, start: int | None = None, n_st: int | None = None
) -> int:
    """First length with dynamical exponent ``>= 1``, capped at the static crossover.

    The scan runs from the rounded average word length upward. Returns
    ``n_st`` when no earlier crossing exists (static and dynamical
    transitions merged).
    """
    if n_st is None:
        n_st = static_crossover(profile, q)
    start = _scan_start(profile) if start is None else start
    if start >= n_st:
        return n_st
    part = partition_function(n_st, q, ClusterWeights.factorial(mu))
    for n in range(start, n_st):
        if profile.log_words(n) > 0 and dynamical_exponent(profile, q, mu, n, part) >= 1.0:
            return n
    return n_st


def critical_mu(
    profile: LanguageProfile,
    q: float,
    lo: float = 1e-3,
    hi: float = 1e3,
    rtol: float = 1e-6,
) -> float:
    """Largest ``mu`` for which the dynamical crossover still equals the static one."""
    n_st = static_crossover(profile, q)

    def detached(mu):
        return dynamical_crossover(profile, q, mu, n_st=n_st) < n_st

    if detached(lo) or not detached(hi):
        raise NoCrossingError(
            f"dynamical crossover does not detach from n_st={n_st} on mu in [{lo:g}, {hi:g}]"
        )
    log_lo, log_hi = math.log(lo), math.log(hi)
    while log_hi - log_lo > math.log1p(rtol):
        mid = 0.5 * (log_lo + log_hi)
        if detached(math.exp(mid)):
            log_hi = mid
        else:
            log_lo = mid
    return math.exp(log_lo)


@dataclass(frozen=True)
class DynamicAnalysis:
    Delta_series: dict[int, float]
    n_dyn: int
    mu_c: float


def dynamic_analysis(profile: LanguageProfile, q: float, mu: float) -> DynamicAnalysis:
    n_st = static_crossover(profile, q)
    part = partition_function(n_st, q, ClusterWeights.factorial(mu))
    series = {
        n: dynamical_exponent(profile, q, mu, n, part)
        for n in range(1, n_st + 1)
        if profile.log_words(n) > 0
    }
    return DynamicAnalysis(series, dynamical_crossover(profile, q, mu, n_st=n_st), critical_mu(profile, q))


def kn_rows(q: float, mus, n_max: int) -> list[tuple[float, int, float, float]]:
    """``(mu, n, K_n, ln(mu q n / e))`` for factorial weights."""
    rows = []
    for mu in mus:
        K = partition_function(n_max, q, ClusterWeights.factorial(mu)).K
        rows.extend(
            (float(mu), n, float(K[n - 1]), math.log(mu * q * n) - 1.0) for n in range(1, n_max + 1)
        )
    return rows


def statdyn_rows(profile: LanguageProfile, q: float, mus) -> list[tuple[str, float, int, int, float]]:
    """``(language, mu, n_dyn, n_st, mean_length)`` over a grid of ``mu``."""
    n_st = static_crossover(profile, q)
    mean = profile.model.mean_length()
    return [
        (profile.name, float(mu), dynamical_crossover(profile, q, mu, n_st=n_st), n_st, mean)
        for mu in mus
    ]


def kn_export(q, mus, n_max) -> str:
    return rows_to_csv(["mu", "n", "K_n", "asymptote"], kn_rows(q, mus, n_max))


def statdyn_export(profile, q, mus) -> str:
    return rows_to_csv(["language", "mu", "n_dyn", "n_st", "mean_length"], statdyn_rows(profile, q, mus))
