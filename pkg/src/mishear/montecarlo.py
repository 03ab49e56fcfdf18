"""Seeded Monte-Carlo cross-checks of the analytic results.

All randomness comes from numpy's ``PCG64`` bit generator seeded with the
configured 64-bit seed, so a given configuration reproduces bit for bit on
any platform. Independent sub-streams, when needed, are spawned from the
same ``SeedSequence``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .clusters import ClusterWeights
from .errors import MishearError
from .variants import ShiftAlteration, SoundString
from .wordlength import LanguageProfile

__all__ = [
    "SimulationConfig",
    "Estimate",
    "PrefixTrie",
    "SyntheticLexicon",
    "make_rng",
    "sample_mishearing",
    "estimate_mishearing_count",
    "estimate_variant_moment",
    "generate_lexicon",
    "empirical_cohort",
    "measured_epsilon",
    "estimate_partition",
]

CHUNK = 100_000


@dataclass(frozen=True)
class SimulationConfig:
    seed: int = 42
    trials: int = 1_000_000
    profile: LanguageProfile | None = None
    q: float = 0.2

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if not 0.0 <= self.q <= 1.0:
            raise ValueError("q must lie in [0, 1]")

    def rng(self) -> np.random.Generator:
        return make_rng(self.seed)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class Estimate:
    mean: float
    stderr: float
    trials: int

    def zscore(self, target: float) -> float:
        if self.stderr == 0:
            return 0.0 if self.mean == target else math.inf
        return (self.mean - target) / self.stderr

    def agrees(self, target: float, n_sigma: float = 3.0) -> bool:
        return abs(self.zscore(target)) <= n_sigma


def _estimate(values: np.ndarray) -> Estimate:
    n = values.size
    stderr = float(values.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return Estimate(float(values.mean()), stderr, n)


def sample_mishearing(
    word: Sequence[int], q: float, rng: np.random.Generator, phi: Callable[[int], int] | None = None,
    nu: int = 20,
) -> SoundString:
    """Hear ``word`` once: each sound becomes ``phi(sound)`` with probability ``q``."""
    phi = phi or ShiftAlteration(nu)
    hits = rng.random(len(word)) < q
    return tuple(phi(s) if h else s for s, h in zip(word, hits))


def estimate_mishearing_count(word: Sequence[int], q: float, config: SimulationConfig, nu: int = 20) -> Estimate:
    """Mean number of altered positions over repeated hearings of ``word``."""
    rng = config.rng()
    word = tuple(word)
    counts = np.empty(config.trials)
    for t in range(config.trials):
        heard = sample_mishearing(word, q, rng, nu=nu)
        counts[t] = sum(a != b for a, b in zip(word, heard))
    return _estimate(counts)


def estimate_variant_moment(n: int, q: float, s: float, config: SimulationConfig) -> Estimate:
    """Sample mean of ``2**(s k)`` with ``k ~ Binomial(n, q)``."""
    if config.trials < 1000:
        raise ValueError("need at least 1000 trials")
    k = config.rng().binomial(n, q, size=config.trials)
    return _estimate(np.exp2(s * k))


def estimate_partition(n: int, q: float, scheme: ClusterWeights, config: SimulationConfig) -> Estimate:
    """Mean over site-percolation samples of the product of cluster weights."""
    if config.trials < 10_000:
        raise ValueError("need at least 10000 trials")
    rng = config.rng()
    log_lam = np.concatenate(([0.0], scheme.log_weights(n)))
    out = np.empty(config.trials)
    for start in range(0, config.trials, CHUNK):
        size = min(CHUNK, config.trials - start)
        occupied = rng.random((size, n)) < q
        log_w = np.zeros(size)
        run = np.zeros(size, dtype=np.int64)
        for col in range(n):
            ends = ~occupied[:, col] & (run > 0)
            log_w[ends] += log_lam[run[ends]]
            run = np.where(occupied[:, col], run + 1, 0)
        log_w += log_lam[run]
        out[start : start + size] = np.exp(log_w)
    return _estimate(out)


class PrefixTrie:
    """Trie over sound strings with pass-through and word-end counts per node.

    Nodes are integers; node 0 is the root. Children live in one flat dict
    keyed by ``(parent, sound)`` to keep memory use modest for 1e5 words.
    """

    def __init__(self):
        self._child: dict[tuple[int, int], int] = {}
        self.passing: list[int] = [0]
        self.ending: list[int] = [0]
        self.depth: list[int] = [0]

    def insert(self, word: Sequence[int]) -> None:
        node = 0
        self.passing[0] += 1
        for s in word:
            key = (node, s)
            nxt = self._child.get(key)
            if nxt is None:
                nxt = len(self.passing)
                self._child[key] = nxt
                self.passing.append(0)
                self.ending.append(0)
                self.depth.append(self.depth[node] + 1)
            node = nxt
            self.passing[node] += 1
        self.ending[node] += 1

    def find(self, prefix: Sequence[int]) -> int | None:
        node = 0
        for s in prefix:
            node = self._child.get((node, s))
            if node is None:
                return None
        return node

    def count_with_prefix(self, prefix: Sequence[int]) -> int:
        node = self.find(prefix)
        return 0 if node is None else self.passing[node]

    def nodes_at_depth(self, m: int) -> np.ndarray:
        return np.nonzero(np.asarray(self.depth) == m)[0]

    def __len__(self):
        return self.passing[0]


@dataclass
class SyntheticLexicon:
    words: set[SoundString]
    nu: int
    prefix_index: PrefixTrie = field(repr=False, default_factory=PrefixTrie)

    @classmethod
    def build(cls, words, nu: int) -> "SyntheticLexicon":
        lex = cls(set(words), nu)
        for w in sorted(lex.words):
            lex.prefix_index.insert(w)
        return lex

    def length_counts(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for w in self.words:
            counts[len(w)] = counts.get(len(w), 0) + 1
        return counts


def generate_lexicon(
    profile: LanguageProfile, config: SimulationConfig, max_attempts_factor: int = 50
) -> SyntheticLexicon:
    """Draw ``lexicon_size`` distinct random words.

    Lengths follow the discrete-normalized word-length model and every sound
    is uniform on ``[0, sounds)``. A word that duplicates an earlier one is
    discarded and a fresh word (new length and sounds) is drawn instead.
    """
    model = profile.model.with_normalization("discrete")
    lengths = np.arange(1, model.n_max_eval + 1)
    probs = model.pmf(lengths)
    probs = probs / probs.sum()
    rng = config.rng()
    target = profile.lexicon_size
    words: set[SoundString] = set()
    attempts = 0
    budget = max_attempts_factor * target
    while len(words) < target:
        if attempts >= budget:
            raise MishearError(
                f"could not place {target} distinct words after {attempts} draws"
            )
        batch = min(max(target - len(words), 64), CHUNK)
        attempts += batch
        draw_len = rng.choice(lengths, size=batch, p=probs)
        sounds = rng.integers(0, profile.sounds, size=int(draw_len.sum()))
        offsets = np.concatenate(([0], np.cumsum(draw_len)))
        for i in range(batch):
            words.add(tuple(sounds[offsets[i] : offsets[i + 1]].tolist()))
            if len(words) == target:
                break
    return SyntheticLexicon.build(words, profile.sounds)


def empirical_cohort(lexicon: SyntheticLexicon, m: int) -> float:
    """Average number of words sharing a realized length-``m`` prefix."""
    trie = lexicon.prefix_index
    nodes = trie.nodes_at_depth(m)
    if nodes.size == 0:
        raise MishearError(f"no word of length >= {m} in the lexicon")
    passing = np.asarray(trie.passing)[nodes]
    return float(passing.mean())


def measured_epsilon(lexicon: SyntheticLexicon, levels: Iterable[int]) -> float:
    """Fraction of realized prefixes at the given lengths that are themselves words.

    Prefixes of all requested lengths are pooled. In a random lexicon the
    fraction varies strongly with length (every one-sound prefix is a word
    once the lexicon is large), so callers should pass the lengths of interest.
    """
    trie = lexicon.prefix_index
    depth = np.asarray(trie.depth)
    selected = np.isin(depth, list(levels)) & (depth > 0)
    if not selected.any():
        raise MishearError("no prefixes at the requested lengths")
    return float(np.mean(np.asarray(trie.ending)[selected] > 0))
