import json
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hamming_shift import (
    BitString,
    JointWeightDistribution,
    Modulus,
    joint_distribution,
    quadrant_masses,
    shift_report,
)
from hamming_shift.exact_dp import exact_feasible, transition_counts
from hamming_shift.oracle import brute_force_joint, modulus_gap


def b(text):
    return BitString.from_str(text)


def test_two_bit_table():
    d = joint_distribution(b("01"), Modulus.pow2(2))
    assert dict(d.items()) == {(0, 1): 1, (1, 1): 1, (1, 2): 1, (2, 0): 1}


def test_one_bit_swap():
    d = joint_distribution(b("1"), Modulus.pow2(1))
    assert dict(d.items()) == {(0, 1): 1, (1, 0): 1}


@pytest.mark.parametrize("n", [1, 5, 12, 40])
def test_zero_shift_is_diagonal(n):
    d = joint_distribution(BitString.zeros(n), Modulus.pow2(n))
    assert dict(d.items()) == {(x, x): comb(n, x) for x in range(n + 1)}


def test_shift_report_examples():
    r = shift_report(b("01"), Modulus.pow2(2))
    assert (r.light_count, r.light_to_heavy, r.union_size, r.epsilon) == (3, 1, 4, Fraction(1, 2))
    r = shift_report(b("00"), Modulus.pow2(2))
    assert (r.light_to_heavy, r.union_size, r.epsilon) == (0, 3, Fraction(1, 4))


def test_four_bit_alternating_frozen():
    # strings 0010, 0110, 1000, 1001, 1010 are the only light-to-heavy moves
    r = shift_report(b("0101"), Modulus.pow2(4))
    assert r.lth_fraction == Fraction(5, 16)


def test_quadrant_examples():
    assert quadrant_masses(joint_distribution(b("01"), Modulus.pow2(2))) == (
        Fraction(1, 4), Fraction(2, 4), Fraction(1, 4), 0)
    assert quadrant_masses(joint_distribution(b("1"), Modulus.pow2(1))) == (
        Fraction(1, 2), 0, Fraction(1, 2), 0)
    d = joint_distribution(BitString.zeros(6), Modulus.pow2(6))
    light = sum(comb(6, w) for w in range(4))
    assert quadrant_masses(d) == (0, Fraction(light, 64), 0, Fraction(64 - light, 64))


@st.composite
def alphas(draw, lo=1, hi=48, pow2m1=False):
    n = draw(st.integers(max(lo, 2 if pow2m1 else 1), hi))
    top = (1 << n) - 2 if pow2m1 else (1 << n) - 1
    return BitString(n, draw(st.integers(0, top)))


@given(alphas())
def test_pow2_marginals_binomial(alpha):
    n = alpha.width
    d = joint_distribution(alpha, Modulus.pow2(n))
    binom = [comb(n, w) for w in range(n + 1)]
    assert list(d.marginal_x()) == binom
    assert list(d.marginal_y()) == binom


@given(alphas())
def test_quadrants_partition_total(alpha):
    n = alpha.width
    d = joint_distribution(alpha, Modulus.pow2(n))
    assert sum(transition_counts(d)) == d.total == 1 << n
    lth, _, htl, _ = transition_counts(d)
    if n % 2 == 0:
        assert lth == htl


@given(alphas(hi=40, pow2m1=True))
def test_pow2m1_total(alpha):
    d = joint_distribution(alpha, Modulus.pow2m1(alpha.width))
    assert d.total == (1 << alpha.width) - 1


@given(alphas(hi=14))
def test_dp_matches_oracle_random(alpha):
    mod = Modulus.pow2(alpha.width)
    assert joint_distribution(alpha, mod) == brute_force_joint(alpha, mod)


@given(alphas(lo=2, hi=14, pow2m1=True))
def test_dp_matches_oracle_pow2m1_random(alpha):
    mod = Modulus.pow2m1(alpha.width)
    assert joint_distribution(alpha, mod) == brute_force_joint(alpha, mod)


@pytest.mark.parametrize("n", [4, 9, 14])
def test_modulus_gap_is_exact_set_difference(n):
    for a in range(0, (1 << n) - 1, max(1, (1 << n) // 97)):
        alpha = BitString(n, a)
        g = modulus_gap(alpha)
        assert g["pow2_lth"] == shift_report(alpha, Modulus.pow2(n)).light_to_heavy
        assert g["pow2m1_lth"] == shift_report(alpha, Modulus.pow2m1(n)).light_to_heavy
        assert g["pow2m1_lth"] == g["pow2_lth"] - g["pow2_extra"] + g["gained"] - g["lost"]


def test_serialisation_round_trip():
    d = joint_distribution(b("0110"), Modulus.pow2m1(4))
    assert JointWeightDistribution.from_json(d.to_json(seed=3)) == d
    doc = json.loads(d.to_json())
    assert all(isinstance(c, str) for row in doc["counts"] for c in row)
    lines = d.to_csv().strip().splitlines()
    assert lines[0] == "x,y,count"
    assert sum(int(l.split(",")[2]) for l in lines[1:]) == d.total


def test_large_counts_are_exact():
    alpha = BitString.from_str("01" * 64)
    d = joint_distribution(alpha, Modulus.pow2(128))
    assert d.total == 1 << 128
    assert isinstance(d.counts[64][64], int)


def test_exact_limits():
    assert exact_feasible(Modulus.pow2(256))
    assert exact_feasible(Modulus.pow2m1(96))
    assert not exact_feasible(Modulus.pow2m1(97))
