"""Acceptance criteria, one test each.

Run with ``pytest tests/test_acceptance.py -s`` to see one PASS/FAIL line per
criterion.  Frozen values below were computed by exhaustive enumeration and
the exact DP before being pinned here.
"""

import math
import subprocess
import sys
import time
from fractions import Fraction as F

import pytest

from hamming_shift import BitString, Modulus, decompose_blocks, parse_alpha, shift_report
from hamming_shift.block_model import (
    T1,
    block_laws_from_tally,
    carry_out_probability,
    dist_given_both_carries,
    moments,
    type4_cd,
    type4_moments,
)
from hamming_shift.clt_approx import remainder_mass, theorem_walkthrough, type4_arrangement_probability
from hamming_shift.oracle import brute_force_block
from hamming_shift.sampler import estimate_fraction
from hamming_shift.verify import verify_dp

# exact light->heavy counts over 2^n, pinned from the DP (cross-checked by enumeration at n=16)
FROZEN_LTH = {
    ("(01)", 16): 19813,
    ("(01)", 32): 1302259037,
    ("(01)", 64): 5601286654026691541,
    ("(1100)", 16): 16856,
    ("(1100)", 32): 1156489170,
    ("(1100)", 64): 5083216170736791739,
}
# alpha = 1: the count is C(n-1, n/2)
FROZEN_SINGLE = {8: 35, 16: 6435, 32: 300540195, 64: 916312070471295267}
FLOOR = 0.03


def verdict(number, label, ok, detail=""):
    print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {label} {detail}".rstrip())
    assert ok, f"criterion {number} failed: {detail}"


def family(unit, n):
    return parse_alpha(f"pat:{unit}^{n // (len(unit) - 2)}")


def test_dp_matches_oracle_exhaustively():
    t0 = time.perf_counter()
    res = verify_dp(10)
    dt = time.perf_counter() - t0
    verdict(1, "DP equals enumeration, n <= 10, both moduli", res.ok and dt < 60, f"{res.passed}/{res.total} in {dt:.1f}s")


def test_block_laws_exact():
    t0 = time.perf_counter()
    checked = bad = 0
    for digit in (0, 1):
        for L in range(1, 13):
            for cin in (0, 1):
                laws = block_laws_from_tally(brute_force_block(digit, L, cin))
                for cout in (0, 1):
                    p = carry_out_probability(digit, L, cin, cout)
                    if not p:
                        bad += cout in laws
                        continue
                    checked += 1
                    bad += dict(dist_given_both_carries(digit, L, cin, cout).support) != laws.get(cout)
    dt = time.perf_counter() - t0
    verdict(2, "carry-conditioned laws, L <= 12", bad == 0 and dt < 30, f"{checked} laws, {bad} mismatches, {dt:.1f}s")


def test_type4_moments():
    bad = []
    for L in range(2, 21):
        mom = moments(block_laws_from_tally(brute_force_block(1, L, 0))[1])
        c, d = type4_cd(L)
        if (mom["var_x"], mom["var_y"], mom["cov"]) != (c, c, d) or mom["EXY"] != type4_moments(L)["EXY"]:
            bad.append(L)
    at_two = type4_cd(2) == (F(2, 9), F(1, 9))
    verdict(3, "type-4 moments, 2 <= L <= 20", not bad and at_two, f"mismatches at {bad}; c,d at L=2 = {type4_cd(2)}")


def test_bounds():
    bad = [L for L in range(2, 65) if not (type4_cd(L)[0] - type4_cd(L)[1] >= F(1, 9) and type4_cd(L)[1] >= F(1, 9))]
    c, d = type4_cd(2)
    verdict(4, "c-d >= 1/9 and d >= 1/9, L <= 64", not bad and c - d == d == F(1, 9), f"violations {bad}")


@pytest.mark.parametrize("unit", ["(01)", "(1100)"])
def test_shift_fraction_floor(unit):
    rows = []
    ok = True
    for n in (16, 32, 64):
        r = shift_report(family(unit, n), Modulus.pow2(n))
        ok &= r.light_to_heavy == FROZEN_LTH[(unit, n)] and r.lth_fraction >= FLOOR
        rows.append(f"n={n}:{float(r.lth_fraction):.5f}")
    verdict(5, f"alpha={unit}^k fraction >= {FLOOR}", ok, " ".join(rows))


def test_single_bit_trend():
    fr = {}
    ok = True
    for n in (8, 16, 32, 64):
        r = shift_report(BitString(n, 1), Modulus.pow2(n))
        ok &= r.light_to_heavy == FROZEN_SINGLE[n] and r.lth_fraction <= 2 / math.sqrt(n)
        fr[n] = r.lth_fraction
    vals = [fr[n] for n in sorted(fr)]
    ok &= all(a > b for a, b in zip(vals, vals[1:]))
    verdict(6, "alpha=1 decreasing and <= 2/sqrt(n)", ok, " ".join(f"n={n}:{float(v):.5f}" for n, v in fr.items()))


def test_many_type4_blocks():
    t0 = time.perf_counter()
    est = type4_arrangement_probability(decompose_blocks(family("(1100)", 64)), 10**5, seed=1)
    p = est.probability
    dt = time.perf_counter() - t0
    ok = p.estimate >= 1 / 6 - 3 * p.standard_error and dt < 60
    verdict(7, "Pr(T4 count > m'/4) >= 1/6 - 3se, (1100)^16", ok, f"{p.estimate:.5f} +/- {p.standard_error:.5f}, {dt:.1f}s")


def test_remainder_circle_mass():
    n = 64
    est = remainder_mass([(T1, i % 2, 2) for i in range(n // 2)], n, 10**5, seed=3)
    ok = est.estimate >= 0.5 - 3 * est.standard_error
    verdict(8, "T1 remainder mass within sqrt(n/2) >= 1/2 - 3se", ok, f"{est.estimate:.5f} +/- {est.standard_error:.5f}")


def test_monte_carlo_calibration():
    alpha, mod = family("(01)", 32), Modulus.pow2(32)
    exact = F(FROZEN_LTH[("(01)", 32)], 1 << 32)
    est = estimate_fraction(alpha, mod, 10**6, seed=7)
    close = abs(est.estimate - float(exact)) <= 3 * est.standard_error
    argv = [sys.executable, "-m", "hamming_shift.cli", "sample", "--alpha", "pat:(01)^16", "--n", "32",
            "--samples", "1000000", "--seed", "7"]
    outs = [subprocess.run(argv, capture_output=True, check=True).stdout for _ in range(2)]
    same = outs[0] == outs[1] and est.to_json() == estimate_fraction(alpha, mod, 10**6, seed=7).to_json()
    verdict(9, "MC within 3se of exact and byte-identical replay", close and same,
            f"{est.estimate:.6f} vs {float(exact):.6f} (se {est.standard_error:.6f}), replay identical={same}")


@pytest.mark.parametrize("unit", ["(01)", "(1100)"])
def test_walkthrough_ordering(unit):
    rep = theorem_walkthrough(family(unit, 64), Modulus.pow2(64), trials=20000, seed=0)
    ok = rep.predicted_quadrant_floor_log <= rep.measured_log and rep.bijection_balanced is True
    verdict(10, f"walkthrough floor <= measured and lth == htl, {unit}^k", ok,
            f"floor_log={rep.predicted_quadrant_floor_log:.2f} measured_log={rep.measured_log:.4f}")


def test_bijection_balance_in_every_exact_run():
    bad = []
    for n in range(2, 41, 2):
        for alpha in (BitString(n, 1), family("(01)", n), BitString(n, (1 << n) // 3), BitString(n, (1 << n) - 1)):
            r = shift_report(alpha, Modulus.pow2(n))
            if r.light_to_heavy != r.heavy_to_light:
                bad.append((n, str(alpha)))
    verdict(10, "lth == htl across exact even-width runs", not bad, f"violations {bad[:3]}")
