from fractions import Fraction
from itertools import groupby

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thuemorse.symbolic import (
    BinaryWord,
    admissible_values,
    binary_digits,
    collapse_h,
    count_words,
    enumerate_words,
    format_rational,
    is_admissible,
    is_dyadic,
    parse_rational,
    point_to_word,
    preimage_count,
    preimage_exponent,
    rho2,
    word_interval,
)

words = st.text(alphabet="01", min_size=1, max_size=14)
unit_rationals = st.fractions(min_value=0, max_value=1, max_denominator=10**6).filter(lambda x: x < 1)


def test_binary_digits_examples():
    assert binary_digits(Fraction(1, 3), 4) == "0101"
    assert binary_digits(Fraction(1, 2), 3) == "100"
    assert binary_digits(0, 5) == "00000"


def test_binary_digits_rejects_one():
    with pytest.raises(ValueError):
        binary_digits(1, 3)
    with pytest.raises(ValueError):
        point_to_word(Fraction(3, 2), 2)


def test_rho2_examples():
    assert rho2(Fraction(1, 3), Fraction(2, 3)) == 1
    assert rho2(Fraction(1, 3), Fraction(5, 12)) == Fraction(1, 4)
    assert rho2(Fraction(1, 3), Fraction(1, 3)) == 0


def test_rho2_undefined_at_dyadic_points():
    with pytest.raises(ValueError):
        rho2(Fraction(1, 2), Fraction(1, 3))


def test_word_basics():
    w = BinaryWord("0110")
    assert w.value == 6 and w.n == 4 and len(w) == 4
    assert w.flipped() == BinaryWord("1001")
    assert w.midpoint() == Fraction(13, 32)
    assert BinaryWord.from_int(6, 4) == w
    assert str(w + "1") == "01101"
    with pytest.raises(ValueError):
        BinaryWord("012")
    with pytest.raises(ValueError):
        BinaryWord.from_int(16, 4)


def test_is_dyadic():
    assert is_dyadic(Fraction(3, 8)) and is_dyadic(0)
    assert not is_dyadic(Fraction(1, 3))


def test_rational_round_trip():
    assert format_rational(Fraction(6, 8)) == "3/4"
    assert parse_rational(" 3/4 ") == Fraction(3, 4)


@given(unit_rationals, st.integers(1, 30))
def test_word_interval_contains_point(x, n):
    lo, hi = word_interval(point_to_word(x, n))
    assert lo <= x < hi


@given(words)
def test_flip_is_an_involution_and_mirrors_intervals(bits):
    w = BinaryWord(bits)
    assert w.flipped().flipped() == w
    lo, hi = word_interval(w)
    flo, fhi = word_interval(w.flipped())
    assert (flo, fhi) == (1 - hi, 1 - lo)


def test_is_admissible():
    assert is_admissible("0101", 1)
    assert not is_admissible("0110", 1)
    assert is_admissible("0110", 2)
    assert not is_admissible("0001", 2)


@pytest.mark.parametrize("m", [1, 2, 3, 5])
def test_counts_agree_with_enumeration(m):
    for n in range(1, 13):
        listed = [w.value for w in enumerate_words(n, m)]
        assert listed == sorted(listed)
        assert len(listed) == count_words(n, m)
        assert np.array_equal(admissible_values(n, m), np.array(listed))
        assert all(is_admissible(BinaryWord.from_int(v, n), m) for v in listed)


def test_brute_force_filter_matches_enumeration():
    for m in (1, 2, 3):
        n = 9
        brute = [w for w in enumerate_words(n) if is_admissible(w, m)]
        assert brute == list(enumerate_words(n, m))


def test_count_words_m1_and_fibonacci_like():
    assert count_words(10, 1) == 2
    # m = 2: twice the Fibonacci numbers
    assert [count_words(n, 2) for n in range(1, 8)] == [2, 4, 6, 10, 16, 26, 42]


def test_collapse_examples():
    assert collapse_h("000", 2) == BinaryWord("001")
    assert collapse_h("0000", 2) == BinaryWord("0011")
    assert collapse_h("0101", 1) == BinaryWord("0101")
    assert collapse_h("0011", 1) == BinaryWord("0101")


@settings(max_examples=300)
@given(words, st.integers(1, 4))
def test_collapse_idempotent_and_admissible(bits, m):
    w = collapse_h(bits, m)
    assert is_admissible(w, m)
    assert collapse_h(w, m) == w
    assert w.bits[: m] == bits[: m]


def _runs_of_length_m_before_last(bits, m):
    runs = [len(list(g)) for _, g in groupby(bits)]
    return sum(1 for r in runs[:-1] if r == m)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 11).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, 2**n - 1))), st.integers(1, 4))
def test_preimage_count_is_power_of_two(nv, m):
    n, v = nv
    w = collapse_h(BinaryWord.from_int(v, n), m)
    i = preimage_exponent(w, m)
    assert i == _runs_of_length_m_before_last(w.bits, m)
    assert preimage_count(w, m) == 2**i


def test_preimage_count_rejects_inadmissible():
    with pytest.raises(ValueError):
        preimage_count("000", 2)


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_preimage_bound_readings(m):
    # all preimages: 2^i <= 2^floor(n/m), equality possible;
    # preimages outside Sigma_m^n: 2^i - 1 < 2^floor(n/m) always
    equality_seen = False
    for n in range(1, 11):
        for w in enumerate_words(n, m):
            total = 2 ** preimage_exponent(w, m)
            assert total <= 2 ** (n // m)
            assert total - 1 < 2 ** (n // m)
            equality_seen |= total == 2 ** (n // m)
    # for m = 1 the last run is never counted, so i <= n - 1 and the bound is strict
    assert equality_seen == (m > 1)


def test_preimage_bound_equality_example():
    assert preimage_count("0001", 3) == 2 == 2 ** (4 // 3)
