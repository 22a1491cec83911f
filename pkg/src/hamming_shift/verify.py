"""Invariant suites behind ``hamming-shift verify``.

Each suite returns a :class:`SuiteResult`; a check is one exact comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .bitstring import BitString, Modulus
from .block_model import (
    block_laws_from_tally,
    carry_out_probability,
    dist_given_both_carries,
    dist_given_carry_in,
    mix,
    moments,
    type4_cd,
    type4_moments,
)
from .clt_approx import gaussian_summary
from .exact_dp import joint_distribution
from .oracle import brute_force_block, brute_force_joint


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    total: int = 0
    failures: list = field(default_factory=list)

    def check(self, ok: bool, label) -> None:
        self.total += 1
        if ok:
            self.passed += 1
        elif len(self.failures) < 20:
            self.failures.append(label)

    @property
    def ok(self) -> bool:
        return self.passed == self.total

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"[{status}] {self.name}: {self.passed}/{self.total}"


def verify_dp(max_n: int = 10) -> SuiteResult:
    res = SuiteResult(f"dp-vs-oracle (n <= {max_n})")
    for n in range(1, max_n + 1):
        for mod in (Modulus.pow2(n), Modulus.pow2m1(n) if n >= 2 else None):
            if mod is None:
                continue
            for a in range(mod.order):
                alpha = BitString(n, a)
                res.check(joint_distribution(alpha, mod) == brute_force_joint(alpha, mod), (n, str(mod), a))
    return res


def verify_lemmas(max_L: int = 12) -> SuiteResult:
    res = SuiteResult(f"block laws and moments (L <= {max_L})")
    for digit in (0, 1):
        for L in range(1, max_L + 1):
            for cin in (0, 1):
                tally = brute_force_block(digit, L, cin)
                total = sum(tally.values())
                empirical = {}
                for (x, y, _), c in tally.items():
                    empirical[(x, y)] = empirical.get((x, y), Fraction(0)) + Fraction(c, total)
                res.check(dict(dist_given_carry_in(digit, L, cin).support) == empirical, ("carry-in law", digit, L, cin))
                by_out = block_laws_from_tally(tally)
                for cout, law in by_out.items():
                    closed = dist_given_both_carries(digit, L, cin, cout).support
                    res.check(dict(closed) == law, ("both-carry law", digit, L, cin, cout))
                mixed = mix(
                    (carry_out_probability(digit, L, cin, cout), dist_given_both_carries(digit, L, cin, cout).support)
                    for cout in (0, 1)
                    if carry_out_probability(digit, L, cin, cout)
                )
                res.check(mixed == dict(dist_given_carry_in(digit, L, cin).support), ("mixture", digit, L, cin))
    for L in range(2, max(max_L, 2) + 1):
        tally = brute_force_block(1, L, 0)
        law = block_laws_from_tally(tally)[1]
        mom = moments(law)
        closed = type4_moments(L)
        c, d = type4_cd(L)
        res.check(mom["EX"] == closed["EX"], ("E[X]", L))
        res.check(mom["EX2"] == closed["EX2"], ("E[X^2]", L))
        res.check(mom["EXY"] == closed["EXY"], ("E[XY]", L))
        res.check(mom["var_x"] == c and mom["var_y"] == c, ("variance", L))
        res.check(mom["cov"] == d, ("covariance", L))
    return res


def verify_bounds(max_L: int = 64) -> SuiteResult:
    res = SuiteResult(f"c - d >= 1/9 and d >= 1/9 (2 <= L <= {max_L})")
    ninth = Fraction(1, 9)
    for L in range(2, max_L + 1):
        c, d = type4_cd(L)
        res.check(c - d >= ninth, ("c-d", L))
        res.check(d >= ninth, ("d", L))
        g = gaussian_summary(L, 1, L)
        res.check(g.axis_sq_major >= Fraction(2, 3) and g.axis_sq_minor >= Fraction(2, 9), ("axes", L))
    c, d = type4_cd(2)
    res.check(c - d == ninth and d == ninth, ("equality at L=2",))
    return res
