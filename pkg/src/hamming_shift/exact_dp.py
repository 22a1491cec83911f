"""Exact joint law of (wt(S), wt(S + alpha)) for uniform S, via a carry DP.

Counts are Python ints held in numpy object arrays so that nothing overflows
at n = 256 and beyond.  The DP walks the bits of alpha from least to most
significant; the table for carry ``c`` holds, at cell ``(x, y)``, the number
of prefixes of S whose weight is ``x`` and whose partial sum has weight ``y``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bitstring import BitString, ModKind, Modulus, check_operand
from .errors import TooWide

EXACT_LIMIT = {ModKind.POW2: 256, ModKind.POW2_MINUS_1: 96}
# Hard guard: beyond this the O(n^3) tables stop being a sensible thing to build.
DP_MAX_WIDTH = 2048


@dataclass(frozen=True)
class JointWeightDistribution:
    width: int
    modulus: Modulus
    counts: tuple[tuple[int, ...], ...]
    sampled: bool = False

    @property
    def total(self) -> int:
        return sum(sum(row) for row in self.counts)

    def array(self) -> np.ndarray:
        return np.array(self.counts, dtype=object)

    def items(self):
        """Nonzero ``((x, y), count)`` pairs in row-major order."""
        for x, row in enumerate(self.counts):
            for y, c in enumerate(row):
                if c:
                    yield (x, y), c

    def marginal_x(self) -> list[int]:
        return [sum(row) for row in self.counts]

    def marginal_y(self) -> list[int]:
        return [sum(col) for col in zip(*self.counts)]

    def to_json(self, **meta) -> str:
        doc = {
            **meta,
            "width": self.width,
            "modulus": str(self.modulus),
            "sampled": self.sampled,
            "total": str(self.total),
            "counts": [[str(c) for c in row] for row in self.counts],
        }
        return json.dumps(doc, indent=1)

    @classmethod
    def from_json(cls, text: str) -> JointWeightDistribution:
        doc = json.loads(text)
        counts = tuple(tuple(int(c) for c in row) for row in doc["counts"])
        mod = Modulus(doc["modulus"], doc["width"])
        return cls(doc["width"], mod, counts, doc.get("sampled", False))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "y", "count"])
        for (x, y), c in self.items():
            w.writerow([x, y, str(c)])
        return buf.getvalue()


@dataclass(frozen=True)
class ShiftReport:
    width: int
    alpha: BitString
    modulus: Modulus
    total: int
    light_count: int
    heavy_count: int
    light_to_heavy: int
    light_to_light: int
    heavy_to_light: int
    heavy_to_heavy: int

    @property
    def union_size(self) -> int:
        """|M u (alpha + M)|: light before, plus light strings whose image is heavy."""
        return self.light_count + self.light_to_heavy

    @property
    def epsilon(self) -> Fraction:
        return Fraction(self.union_size, self.total) - Fraction(1, 2)

    @property
    def lth_fraction(self) -> Fraction:
        return Fraction(self.light_to_heavy, self.total)

    def as_dict(self) -> dict:
        eps = self.epsilon
        return {
            "width": self.width,
            "alpha": str(self.alpha),
            "modulus": str(self.modulus),
            "total": str(self.total),
            "light_count": str(self.light_count),
            "heavy_count": str(self.heavy_count),
            "light_to_heavy": str(self.light_to_heavy),
            "light_to_light": str(self.light_to_light),
            "heavy_to_light": str(self.heavy_to_light),
            "heavy_to_heavy": str(self.heavy_to_heavy),
            "union_size": str(self.union_size),
            "epsilon": f"{eps.numerator}/{eps.denominator}",
            "epsilon_float": float(eps),
            "lth_fraction": float(self.lth_fraction),
        }


def _zeros(size: int) -> np.ndarray:
    return np.zeros((size, size), dtype=object)


def _pow2_dp(alpha_bits, n):
    tabs = [_zeros(n + 1), _zeros(n + 1)]
    tabs[0][0, 0] = 1
    for i, a in enumerate(alpha_bits):
        hi = i + 1  # weights seen so far are <= i
        new = [_zeros(n + 1), _zeros(n + 1)]
        for c in (0, 1):
            src = tabs[c][:hi, :hi]
            for s in (0, 1):
                total = a + s + c
                t, c2 = total & 1, total >> 1
                new[c2][s:hi + s, t:hi + t] += src
        tabs = new
    return tabs[0] + tabs[1]


def _pow2m1_dp(alpha_bits, n):
    # ones[c][x]: partial sum T is all ones so far (its weight is the position).
    # low[c]: T has a zero, weights (x, y) as they stand -> used if no end carry.
    # bumped[c]: same paths with y pre-shifted by 1 - z, z = T's trailing-ones
    #   run, which is exactly the weight change of adding the end carry back.
    size = n + 1
    ones = [np.zeros(size, dtype=object), np.zeros(size, dtype=object)]
    ones[0][0] = 1
    low = [_zeros(size), _zeros(size)]
    bumped = [_zeros(size), _zeros(size)]
    for i, a in enumerate(alpha_bits):
        hi = i + 1
        n_ones = [np.zeros(size, dtype=object), np.zeros(size, dtype=object)]
        n_low = [_zeros(size), _zeros(size)]
        n_bumped = [_zeros(size), _zeros(size)]
        for c in (0, 1):
            for s in (0, 1):
                total = a + s + c
                t, c2 = total & 1, total >> 1
                run = ones[c][:hi]
                if t:
                    n_ones[c2][s:hi + s] += run
                else:
                    # first zero of T at position i: trailing run z = i, weight i
                    n_low[c2][s:hi + s, i] += run
                    n_bumped[c2][s:hi + s, 1] += run
                n_low[c2][s:hi + s, t:hi + t] += low[c][:hi, :hi]
                n_bumped[c2][s:hi + s, t:hi + t] += bumped[c][:hi, :hi]
        ones, low, bumped = n_ones, n_low, n_bumped
    if any(ones[1]):
        raise AssertionError("all-ones sum with an end carry cannot occur")
    out = low[0] + bumped[1]
    # sum == 2^n - 1 is the residue 0
    out[:, 0] += ones[0]
    # the DP ran over all 2^n strings; S = 1^n (= residue 0) maps to alpha
    out[n, sum(alpha_bits)] -= 1
    return out


def joint_distribution(alpha: BitString, mod: Modulus) -> JointWeightDistribution:
    check_operand(alpha, mod, "alpha")
    n = mod.width
    if n > DP_MAX_WIDTH:
        raise TooWide(f"exact DP is limited to n <= {DP_MAX_WIDTH}")
    bits = alpha.bits
    if mod.kind is ModKind.POW2:
        table = _pow2_dp(bits, n)
    else:
        table = _pow2m1_dp(bits, n)
    counts = tuple(tuple(int(c) for c in row) for row in table)
    return JointWeightDistribution(n, mod, counts)


def _is_light(w: int, n: int) -> bool:
    return 2 * w <= n


def transition_counts(dist: JointWeightDistribution) -> tuple[int, int, int, int]:
    """(light->heavy, light->light, heavy->light, heavy->heavy)."""
    n = dist.width
    lth = ltl = htl = hth = 0
    for (x, y), c in dist.items():
        if _is_light(x, n):
            if _is_light(y, n):
                ltl += c
            else:
                lth += c
        elif _is_light(y, n):
            htl += c
        else:
            hth += c
    return lth, ltl, htl, hth


def shift_report_from(dist: JointWeightDistribution, alpha: BitString) -> ShiftReport:
    lth, ltl, htl, hth = transition_counts(dist)
    return ShiftReport(
        width=dist.width,
        alpha=alpha,
        modulus=dist.modulus,
        total=dist.total,
        light_count=lth + ltl,
        heavy_count=htl + hth,
        light_to_heavy=lth,
        light_to_light=ltl,
        heavy_to_light=htl,
        heavy_to_heavy=hth,
    )


def shift_report(alpha: BitString, mod: Modulus) -> ShiftReport:
    return shift_report_from(joint_distribution(alpha, mod), alpha)


def quadrant_masses(dist: JointWeightDistribution) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """Masses of light->heavy, light->light, heavy->light, heavy->heavy."""
    total = dist.total
    return tuple(Fraction(c, total) for c in transition_counts(dist))


def exact_feasible(mod: Modulus) -> bool:
    return mod.width <= EXACT_LIMIT[mod.kind]
