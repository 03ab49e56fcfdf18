import math

import pytest
from hypothesis import given, strategies as st

from mishear.variants import (
    ShiftAlteration,
    average_variants,
    delta_exponent,
    enumerate_variants,
    kappa,
    kappa_bar,
    lambda_moment,
    mishearing_count_pmf,
    moment_variants,
)


def binomial_moment(n, q, weight):
    return sum(weight(k) * math.comb(n, k) * q**k * (1 - q) ** (n - k) for k in range(n + 1))


def test_count_pmf_examples():
    assert mishearing_count_pmf(3, 0.0, 0) == 1.0
    assert mishearing_count_pmf(2, 0.5, 1) == pytest.approx(0.5)
    assert abs(sum(mishearing_count_pmf(10, 0.2, k) for k in range(11)) - 1) <= 1e-12
    with pytest.raises(ValueError):
        mishearing_count_pmf(3, 0.2, 4)


def test_rates():
    assert kappa(0.2) == pytest.approx(0.18232155679395462, rel=1e-14)
    assert kappa_bar(0.5) == pytest.approx(0.5 * math.log(2))
    for q in (0.0, 0.1, 0.7, 1.0):
        assert lambda_moment(1, q) == pytest.approx(kappa(q), abs=1e-15)
        assert lambda_moment(0, q) == 0.0


@pytest.mark.parametrize("q", [0.1, 0.2, 0.5])
def test_lambda_derivative_at_zero(q):
    h = 1e-6
    fd = (lambda_moment(h, q) - lambda_moment(-h, q)) / (2 * h)
    assert abs(fd - kappa_bar(q)) < 1e-8


def test_average_variants_examples():
    assert average_variants(7, 0.0) == 1.0
    assert average_variants(1, 0.5) == pytest.approx(1.5)
    assert average_variants(10, 0.2) == pytest.approx(6.191736422399997, rel=1e-12)
    assert abs(average_variants(10, 0.2) - binomial_moment(10, 0.2, lambda k: 2**k)) <= 1e-12


def test_moment_variants_examples():
    assert moment_variants(5, 0.3, 1) == pytest.approx(average_variants(5, 0.3), rel=1e-14)
    assert moment_variants(5, 0.3, 0) == 1.0
    assert moment_variants(6, 0.3, 2) == pytest.approx(binomial_moment(6, 0.3, lambda k: 4**k), abs=1e-10)


@pytest.mark.parametrize("q", [0.1, 0.2, 0.5])
@pytest.mark.parametrize("s", [0, 0.5, 1, 2])
def test_moments_match_binomial_sums(q, s):
    for n in range(1, 13):
        exact = binomial_moment(n, q, lambda k: 2 ** (s * k))
        assert abs(moment_variants(n, q, s) - exact) <= 1e-10 * max(1.0, exact)


@pytest.mark.parametrize("q", [0.05, 0.3, 0.9])
def test_lambda_increasing_convex(q):
    h = 0.01
    grid = [-1 + i * h for i in range(401)]
    vals = [lambda_moment(s, q) for s in grid]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert all(vals[i - 1] - 2 * vals[i] + vals[i + 1] > 0 for i in range(1, len(vals) - 1))


@given(st.floats(0.0, 0.05), st.floats(0.0, 2.0))
def test_small_q_linearization(q, s):
    x = (2**s - 1) * q
    assert abs(lambda_moment(s, q) - x) <= q**2 * (2**s - 1) ** 2 + 1e-15


def test_delta_exponent():
    assert round(delta_exponent(0.2, 20), 2) == 0.06
    assert delta_exponent(0.0, 20) == 0.0
    assert delta_exponent(0.5, 2) < 1


def test_enumerate_worked_example():
    phi = ShiftAlteration(20)
    w = (4, 9, 13)
    assert enumerate_variants(w, {2, 3}, phi) == {
        (4, 9, 13),
        (4, 10, 13),
        (4, 9, 14),
        (4, 10, 14),
    }
    assert enumerate_variants(w, set(), phi) == {w}


def test_enumerate_errors():
    with pytest.raises(ValueError):
        enumerate_variants((1, 2), {3}, ShiftAlteration(5))
    with pytest.raises(ValueError):
        enumerate_variants((1, 2), {1}, lambda s: s)


@pytest.mark.parametrize("k", range(11))
def test_enumerate_cardinality(k):
    phi = ShiftAlteration(7)
    word = tuple(i % 7 for i in range(12))
    positions = set(range(1, k + 1))
    variants = enumerate_variants(word, positions, phi)
    # direct cartesian construction over the chosen positions
    expected = {()}
    for i, s in enumerate(word, start=1):
        options = (s, phi(s)) if i in positions else (s,)
        expected = {v + (o,) for v in expected for o in options}
    assert variants == expected
    assert len(variants) == 2**k


def test_shift_alteration_is_fixed_point_free():
    phi = ShiftAlteration(20)
    assert all(phi(s) != s for s in range(20))
    with pytest.raises(ValueError):
        ShiftAlteration(20, shift=40)
