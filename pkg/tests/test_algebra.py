import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lmdist.algebra import (
    DEFAULT_PRIME,
    PrimeField,
    binomial_exact,
    is_prime,
    largest_prime_in,
    ln_big,
    ln_factorial_ratio_estimate,
    ln_factorial_ratio_exact,
)
from oracles import pascal_binomial


def test_binomial_basics():
    assert binomial_exact(4, 2) == 6
    for a in (0, 1, 7, 50, 1000):
        assert binomial_exact(a, 0) == 1
    assert binomial_exact(3, 5) == 0
    with pytest.raises(ValueError):
        binomial_exact(-1, 0)


def test_binomial_against_pascal_oracle():
    assert binomial_exact(50, 25) == pascal_binomial(50, 25)
    assert binomial_exact(37, 11) == pascal_binomial(37, 11)


def test_pascal_rule_exhaustive():
    for a in range(1, 61):
        for b in range(1, a + 1):
            assert binomial_exact(a, b) == binomial_exact(a - 1, b - 1) + binomial_exact(a - 1, b)
        assert binomial_exact(a, 0) == 1


def test_is_prime():
    primes = [2, 3, 5, 7, 13, 61, 2**61 - 1]
    composites = [0, 1, 4, 9, 25, 561, 2**61 - 3]
    assert all(is_prime(p) for p in primes)
    assert not any(is_prime(c) for c in composites)


def test_largest_prime_in():
    assert largest_prime_in(4, 8) == 7
    assert largest_prime_in(8, 16) == 13
    assert largest_prime_in(24, 28) is None
    assert largest_prime_in(2, 2) == 2


def test_prime_field_construction():
    with pytest.raises(ValueError):
        PrimeField(2**61 - 3)
    f = PrimeField()
    assert f.p == DEFAULT_PRIME


@given(st.integers(0, 6), st.integers(0, 6), st.integers(0, 6))
def test_field_axioms_gf7(a, b, c):
    f = PrimeField(7)
    assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
    assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    assert f.add(a, f.neg(a)) == 0
    if a != 0:
        assert f.mul(a, f.inv(a)) == 1


@settings(max_examples=50)
@given(st.integers(0, DEFAULT_PRIME - 1), st.integers(0, DEFAULT_PRIME - 1))
def test_field_axioms_default_prime(a, b):
    f = PrimeField()
    assert f.add(a, b) == (a + b) % f.p
    assert f.sub(a, b) == (a - b) % f.p
    if b != 0:
        assert f.mul(f.mul(a, b), f.inv(b)) == a % f.p


def test_field_embed_fraction():
    from fractions import Fraction

    f = PrimeField(7)
    x = f.embed(Fraction(3, 4))
    assert f.mul(x, 4) == 3


def test_ln_factorial_ratio_exact_values():
    assert ln_factorial_ratio_exact(100, 0, 0) == 0.0
    expected = sum(math.log(j) for j in range(996, 1006))
    assert ln_factorial_ratio_exact(1000, 5, 5) == pytest.approx(expected, abs=1e-12)
    # ln(12!/9!) = ln 1320
    assert ln_factorial_ratio_exact(10, 2, 1) == pytest.approx(math.log(1320), abs=1e-12)
    assert ln_factorial_ratio_exact(
        10, 2, 1
    ) == pytest.approx(math.log(math.factorial(12) // math.factorial(9)), abs=1e-12)
    with pytest.raises(ValueError):
        ln_factorial_ratio_exact(3, 0, 4)


def test_ln_factorial_ratio_estimate_values():
    est, budget = ln_factorial_ratio_estimate(1000, 5, 5)
    assert est == pytest.approx(10 * math.log(1000))
    assert budget == pytest.approx(0.1)
    assert ln_factorial_ratio_estimate(123, 0, 0) == (0.0, 0.0)
    est, budget = ln_factorial_ratio_estimate(10**6, 10, 10)
    assert est == pytest.approx(20 * math.log(10**6))
    assert budget == pytest.approx(4e-4)
    with pytest.raises(ValueError):
        ln_factorial_ratio_estimate(10, 6, 6)


@given(st.integers(100, 5000), st.data())
def test_estimate_calibration_sampled(a, data):
    cap = math.isqrt(a) // 4
    f = data.draw(st.integers(0, cap))
    g = data.draw(st.integers(0, cap))
    exact = ln_factorial_ratio_exact(a, f, g)
    est, budget = ln_factorial_ratio_estimate(a, f, g)
    assert abs(exact - est) <= 3 * budget + 1e-12


def test_ln_big_matches_log():
    assert ln_big(10**300) == pytest.approx(300 * math.log(10), rel=1e-12)
    huge = 7**3000
    assert ln_big(huge) == pytest.approx(3000 * math.log(7), rel=1e-9)
