import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from serre_adjoint.arith import (
    bernoulli,
    divisor_bound_constant,
    divisor_count,
    divisor_count_table,
    sigma_power,
    sigma_table,
)

from oracles import divisors_naive, sigma_naive


@pytest.mark.parametrize("r", [0, 1, 3, 5, 9])
def test_sigma_table_matches_brute_force(r):
    tab = sigma_table(r, 200)
    assert all(tab[n] == sigma_naive(r, n) for n in range(1, 201))


def test_divisor_count_table():
    tab = divisor_count_table(300)
    assert all(tab[n] == divisors_naive(n) for n in range(1, 301))


def test_sigma_rejects_nonpositive():
    with pytest.raises(ValueError):
        sigma_power(1, 0)


@given(st.integers(1, 300), st.integers(1, 300), st.integers(0, 5))
def test_sigma_is_multiplicative(a, b, r):
    if math.gcd(a, b) == 1:
        assert sigma_power(r, a * b) == sigma_power(r, a) * sigma_power(r, b)


def test_bernoulli_values():
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(4) == Fraction(-1, 30)
    assert bernoulli(12) == Fraction(-691, 2730)
    with pytest.raises(ValueError):
        bernoulli(3)


def test_divisor_bound_constant_known_value():
    # d(n) <= sqrt(3) sqrt(n), attained at n = 12
    assert divisor_bound_constant(Fraction(1, 2)) == pytest.approx(math.sqrt(3), rel=1e-9)
    assert divisor_count(12) == pytest.approx(divisor_bound_constant(Fraction(1, 2)) * math.sqrt(12), rel=1e-9)


@pytest.mark.parametrize("delta", [Fraction(1, 2), Fraction(1, 4), Fraction(1, 6), Fraction(1, 8)])
def test_divisor_bound_holds(delta):
    c = divisor_bound_constant(delta)
    tab = divisor_count_table(100_000)
    worst = max(tab[n] / n ** float(delta) for n in range(1, 100_001))
    assert worst <= c


@given(st.integers(1, 10**12))
def test_divisor_bound_on_large_n(n):
    assert divisor_count(n) <= divisor_bound_constant(Fraction(1, 4)) * n**0.25
