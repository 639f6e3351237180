from fractions import Fraction
from math import inf

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tempered.errors import FormatError
from tempered.padic_arith import (Prime, abs_value, format_rational,
                                  parse_rational, valuation)


def naive_valuation(x, p):
    """Count factors of p by repeated division."""
    if x == 0:
        return inf
    num, den, v = abs(x.numerator), x.denominator, 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


rationals = st.fractions(max_denominator=10**6).filter(lambda x: abs(x.numerator) < 10**12)
primes = st.sampled_from([2, 3, 5, 7, 11, 101])


def test_valuation_examples():
    assert valuation(0, 5) == inf
    assert valuation(50, 5) == 2
    assert valuation(Fraction(3, 20), 2) == -2


def test_abs_value_examples():
    assert abs_value(0, 3) == 0
    assert abs_value(1, 3) == 1
    assert abs_value(Fraction(1, 8), 2) == 8


@pytest.mark.parametrize("bad", [0, 1, 4, 9, 91, -3, 2.5, True])
def test_prime_rejects(bad):
    with pytest.raises(ValueError):
        Prime(bad)


def test_prime_accepts():
    assert Prime(97) == 97 and Prime(Prime(2)) == 2


@given(rationals, primes)
def test_valuation_matches_division(x, p):
    assert valuation(x, p) == naive_valuation(x, p)


@given(rationals, rationals, primes)
def test_ultrametric(a, b, p):
    lhs = abs_value(a + b, p)
    ra, rb = abs_value(a, p), abs_value(b, p)
    assert lhs <= max(ra, rb)
    if ra != rb:
        assert lhs == max(ra, rb)


@given(rationals, rationals, primes)
def test_multiplicative(a, b, p):
    assert abs_value(a * b, p) == abs_value(a, p) * abs_value(b, p)


@given(rationals.filter(bool), primes)
def test_value_group_is_discrete(x, p):
    r = abs_value(x, p)
    v = naive_valuation(x, p)
    assert r == Fraction(p) ** -v


@given(rationals)
def test_rational_literal_round_trip(x):
    assert parse_rational(format_rational(x)) == x


@pytest.mark.parametrize("text", ["", "1/", "/2", "1/0", "a", "1.5", "1//2"])
def test_bad_literals(text):
    with pytest.raises(FormatError):
        parse_rational(text)


def test_literal_syntax():
    assert format_rational(Fraction(4, 2)) == "2"
    assert format_rational(Fraction(-3, 6)) == "-1/2"
    assert parse_rational(" -7/14 ") == Fraction(-1, 2)
