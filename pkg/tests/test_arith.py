import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ecgroups import arith


def trial_division_is_prime(x):
    # independent oracle: plain trial division
    if x < 2:
        return False
    d = 2
    while d * d <= x:
        if x % d == 0:
            return False
        d += 1
    return True


def test_is_prime_fixed_values():
    assert arith.is_prime(2)
    assert not arith.is_prime(1)
    assert not arith.is_prime(0)
    assert not arith.is_prime(1015)  # 5 * 7 * 29
    assert arith.is_prime(2 ** 61 - 1)  # Mersenne
    assert not arith.is_prime(2 ** 62 - 1)


def test_is_prime_agrees_with_trial_division_below_3000():
    for x in range(3000):
        assert arith.is_prime(x) == trial_division_is_prime(x), x


@given(st.integers(min_value=0, max_value=10 ** 6))
def test_is_prime_agrees_with_trial_division_random(x):
    assert arith.is_prime(x) == trial_division_is_prime(x)


def test_is_prime_strong_pseudoprimes():
    # strong pseudoprimes to base 2 must still be rejected
    for x in (2047, 3277, 4033, 8321, 65281, 3215031751):
        assert not arith.is_prime(x)


def test_is_prime_range_guard():
    with pytest.raises(OverflowError):
        arith.is_prime(2 ** 63 + 1)


def test_isqrt():
    assert arith.isqrt(0) == 0
    assert arith.isqrt(15) == 3
    assert arith.isqrt(16) == 4


@given(st.integers(min_value=0, max_value=2 ** 64))
def test_isqrt_bracket(x):
    r = arith.isqrt(x)
    assert r * r <= x < (r + 1) * (r + 1)


@given(st.integers(min_value=0, max_value=2 ** 63 - 1), st.integers(min_value=1, max_value=64))
def test_iroot_bracket(x, r):
    y = arith.iroot(x, r)
    assert y ** r <= x
    assert (y + 1) ** r > x


def test_prime_power_decompose_fixed():
    assert arith.prime_power_decompose(16) == (2, 4)
    assert arith.prime_power_decompose(12) is None
    assert arith.prime_power_decompose(243) == (3, 5)
    assert arith.prime_power_decompose(0) is None
    assert arith.prime_power_decompose(1) is None
    assert arith.prime_power_decompose(2) == (2, 1)
    assert arith.prime_power_decompose(4096) == (2, 12)
    assert arith.prime_power_decompose(961) == (31, 2)
    assert arith.prime_power_decompose(1024 * 1024 - 1) is None


def test_prime_power_decompose_all_small():
    # independent oracle: rebuild every prime power below 5000 directly
    expected = {}
    for p in range(2, 5000):
        if trial_division_is_prime(p):
            v, m = p, 1
            while v < 5000:
                expected[v] = (p, m)
                v *= p
                m += 1
    for q in range(5000):
        assert arith.prime_power_decompose(q) == expected.get(q), q


@given(st.sampled_from([p for p in range(2, 100) if trial_division_is_prime(p)]),
       st.integers(min_value=1, max_value=62))
def test_prime_power_decompose_roundtrip(p, m):
    q = p ** m
    if q < 2 ** 63:
        assert arith.prime_power_decompose(q) == (p, m)


def test_primes_in_range_fixed():
    assert list(arith.primes_in_range(1, 10)) == [2, 3, 5, 7]
    assert list(arith.primes_in_range(90, 100)) == [97]
    assert list(arith.primes_in_range(2, 2)) == [2]
    assert list(arith.primes_in_range(24, 28)) == []


def test_primes_in_range_segmented_matches_one_shot():
    a = arith.primes_in_range(10 ** 6 - 200, 10 ** 6 + 200, segment_size=32)
    b = [x for x in range(10 ** 6 - 200, 10 ** 6 + 201) if trial_division_is_prime(x)]
    assert list(a) == b


def test_primes_in_range_guards():
    with pytest.raises(ValueError):
        arith.primes_in_range(10, 5)
    with pytest.raises(OverflowError):
        arith.primes_in_range(2, 2 ** 63)


def test_pi_progression_fixed():
    # direct sieve lists 5,13,17,29,37,41,53,61,73,89,97
    assert arith.pi_progression(100, 4, 1) == 11
    assert arith.pi_progression(1, 3, 1) == 0
    assert arith.pi_progression(30, 5, 1) == 1
    with pytest.raises(ValueError):
        arith.pi_progression(100, 4, 2)


def test_pi_progression_prime_powers():
    # prime powers = 1 mod 4 up to 100: primes {5,...,97} plus 9, 25, 49, 81
    base = arith.pi_progression(100, 4, 1)
    assert arith.pi_progression(100, 4, 1, count_prime_powers=True) == base + 4
    assert arith.pi_progression(10, 1, 0 + 1, count_prime_powers=True) == 4 + 3  # 2,3,5,7 + 4,8,9


@given(st.integers(min_value=0, max_value=3000), st.integers(min_value=1, max_value=12))
@settings(max_examples=60)
def test_pi_progression_residue_sum(x, m):
    total = sum(arith.pi_progression(x, m, a) for a in range(1, m + 1) if math.gcd(a, m) == 1)
    primes = [p for p in range(2, x + 1) if trial_division_is_prime(p)]
    assert total == len(primes) - sum(1 for p in primes if m % p == 0)


@given(st.integers(min_value=0, max_value=2000), st.integers(min_value=1, max_value=10))
@settings(max_examples=40)
def test_progression_prime_powers_dominate(x, m):
    a = 1  # always coprime
    assert (arith.pi_progression(x, m, a, count_prime_powers=True)
            >= arith.pi_progression(x, m, a))


def test_euler_phi_fixed():
    assert arith.euler_phi(1) == 1
    assert arith.euler_phi(12) == 4
    assert arith.euler_phi(30) == 8
    assert arith.euler_phi(30 * 30) == 30 * arith.euler_phi(30) == 240
    with pytest.raises(ValueError):
        arith.euler_phi(0)


@given(st.integers(min_value=1, max_value=5000))
def test_euler_phi_counts_units(n):
    assert arith.euler_phi(n) == sum(1 for a in range(1, n + 1) if math.gcd(a, n) == 1)


def test_legendre_fixed():
    assert arith.legendre_symbol(-1, 5) == 1
    assert arith.legendre_symbol(2, 3) == -1
    assert arith.legendre_symbol(6, 3) == 0
    with pytest.raises(ValueError):
        arith.legendre_symbol(1, 4)
    with pytest.raises(ValueError):
        arith.legendre_symbol(1, 2)


@given(st.sampled_from([p for p in range(3, 200) if trial_division_is_prime(p)]),
       st.integers(min_value=-500, max_value=500))
def test_legendre_matches_square_enumeration(p, a):
    squares = {(x * x) % p for x in range(1, p)}
    if a % p == 0:
        expect = 0
    else:
        expect = 1 if a % p in squares else -1
    assert arith.legendre_symbol(a, p) == expect


def test_factorize_and_divisors():
    assert arith.factorize(1) == {}
    assert arith.factorize(360) == {2: 3, 3: 2, 5: 1}
    assert arith.factorize(2 ** 31 - 1) == {2 ** 31 - 1: 1}
    assert arith.divisors(28) == [1, 2, 4, 7, 14, 28]


@given(st.integers(min_value=1, max_value=10 ** 6))
@settings(max_examples=200)
def test_factorize_reassembles(n):
    fac = arith.factorize(n)
    prod = 1
    for p, e in fac.items():
        assert trial_division_is_prime(p)
        prod *= p ** e
    assert prod == n


def test_base_primes_dtype():
    ps = arith.primes_in_range(2, 1000)
    assert isinstance(ps, np.ndarray) and ps.dtype == np.int64
