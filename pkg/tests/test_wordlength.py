import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import TABLE1
from mishear.corpus import EmpiricalDistribution
from mishear.errors import FitError
from mishear.wordlength import (
    GammaWordLengthModel,
    LanguageProfile,
    bundled_profiles,
    fit_gamma,
    fit_gamma_report,
    load_profiles,
)

ENGLISH = GammaWordLengthModel(4.4, 0.60)


def exact_distribution(alpha, beta, n_max=100):
    m = GammaWordLengthModel(alpha, beta, n_max, "discrete")
    return EmpiricalDistribution({n: m.pmf(n) for n in range(1, n_max + 1)})


def test_pmf_english_mode():
    # C evaluated with math.gamma, independently of the package's gammaln path
    assert ENGLISH.pmf(7) == pytest.approx(0.11145194752866627, rel=1e-12)
    assert ENGLISH.pmf(7) == pytest.approx(0.112, abs=1e-3)


def test_pmf_positive_and_vectorized():
    n = np.arange(1, 101)
    p = ENGLISH.pmf(n)
    assert np.all(p > 0)
    assert p[6] == ENGLISH.pmf(7)


def test_pmf_small_alpha_is_geometric_shape():
    m = GammaWordLengthModel(1e-12, 0.5)
    ratios = [m.pmf(n + 1) / m.pmf(n) for n in range(1, 10)]
    assert ratios == pytest.approx([math.exp(-0.5)] * 9, rel=1e-9)


def test_pmf_rejects_zero():
    with pytest.raises(ValueError):
        ENGLISH.pmf(0)


def test_invalid_parameters():
    with pytest.raises(ValueError):
        GammaWordLengthModel(0.0, 1.0)
    with pytest.raises(ValueError):
        GammaWordLengthModel(1.0, 1.0, normalization_mode="other")


@pytest.mark.parametrize("name", TABLE1)
def test_continuous_mass_close_to_one(name):
    a, b, *_ = TABLE1[name]
    total = GammaWordLengthModel(a, b).pmf(np.arange(1, 101)).sum()
    assert 0.99 < total < 1.01


@pytest.mark.parametrize("name", TABLE1)
def test_discrete_mass_is_one(name):
    a, b, *_ = TABLE1[name]
    m = GammaWordLengthModel(a, b, normalization_mode="discrete")
    assert abs(m.tail_sum(1) - 1) <= 1e-12


def test_tail_sum_examples():
    assert ENGLISH.tail_sum(100) == ENGLISH.pmf(100)
    assert ENGLISH.tail_sum(4) == pytest.approx(0.9606489689837012, rel=1e-12)
    with pytest.raises(ValueError):
        ENGLISH.tail_sum(101)


@pytest.mark.parametrize("name", TABLE1)
def test_tail_difference(name):
    a, b, *_ = TABLE1[name]
    m = GammaWordLengthModel(a, b)
    for k in range(1, 100):
        assert abs(m.tail_sum(k) - m.tail_sum(k + 1) - m.pmf(k)) <= 1e-12


def test_mean_length():
    assert GammaWordLengthModel(6.8, 0.58).mean_length() == pytest.approx(13.4483, abs=1e-4)
    assert GammaWordLengthModel(2.6, 0.28).mean_length() == pytest.approx(12.857, abs=1e-3)
    assert GammaWordLengthModel(1, 1).mean_length() == 2


@pytest.mark.parametrize("name", TABLE1)
def test_mode_matches_table(name):
    a, b, _, n_star = TABLE1[name]
    m = GammaWordLengthModel(a, b)
    assert m.mode_length() == n_star
    grid = np.arange(1, 60)
    assert abs(int(grid[np.argmax(m.pmf(grid))]) - n_star) <= 1


def test_mode_ties_round_up():
    assert GammaWordLengthModel(1.5, 1.0).mode_length() == 2
    assert GammaWordLengthModel(0.7, 0.7).mode_length() == 1


def test_fit_round_trip_english():
    m = fit_gamma(exact_distribution(4.4, 0.60))
    assert m.alpha == pytest.approx(4.4, abs=0.02)
    assert m.beta == pytest.approx(0.60, abs=0.005)


def test_fit_report_fields():
    rep = fit_gamma_report(exact_distribution(2.6, 0.28), normalization_mode="discrete")
    assert rep.model.normalization_mode == "discrete"
    assert rep.residual_norm < 1e-8
    assert rep.lengths.size == rep.fitted.size == rep.empirical.size


def test_fit_mle_round_trip():
    m = fit_gamma(exact_distribution(6.0, 0.94), method="mle")
    assert m.alpha == pytest.approx(6.0, rel=1e-3)
    assert m.beta == pytest.approx(0.94, rel=1e-3)


def test_fit_needs_three_lengths():
    with pytest.raises(FitError):
        fit_gamma(EmpiricalDistribution({3: 0.5, 4: 0.5}))


def test_fit_nonconvergence_carries_iterate():
    with pytest.raises(FitError) as info:
        fit_gamma(exact_distribution(4.4, 0.6), max_iter=1)
    assert info.value.best is not None


@settings(max_examples=25, deadline=None)
@given(st.floats(2.0, 9.0), st.floats(0.25, 1.7))
def test_fit_scale_consistent(alpha, beta):
    m = fit_gamma(exact_distribution(alpha, beta))
    assert m.alpha == pytest.approx(alpha, rel=0.01)
    assert m.beta == pytest.approx(beta, rel=0.01)


def test_bundled_profiles():
    profs = bundled_profiles()
    assert [p.name for p in profs] == list(TABLE1)
    for p in profs:
        assert (p.lexicon_size, p.sounds, p.epsilon) == (100_000, 20, 0.05)


def test_load_profiles_list_and_errors(tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps([{"name": "X", "alpha": 3, "beta": 0.5, "epsilon": 0.1}]))
    (p,) = load_profiles(path)
    assert p.epsilon == 0.1 and p.lexicon_size == 100_000
    path.write_text("")
    with pytest.raises(ValueError):
        load_profiles(path)
    path.write_text(json.dumps({"profiles": [{"name": "X", "alpha": 3}]}))
    with pytest.raises(ValueError, match="beta"):
        load_profiles(path)


def test_profile_invariants():
    with pytest.raises(ValueError):
        LanguageProfile("x", ENGLISH, epsilon=0.0)
    with pytest.raises(ValueError):
        LanguageProfile("x", ENGLISH, sounds=1)
    p = LanguageProfile("x", ENGLISH)
    assert LanguageProfile.from_dict(p.to_dict()) == p
