"""Asymptotic pipeline: carry arrangements, Gaussian geometry, remainder bounds.

Everything that ends up in a bound is kept in natural-log space.  The final
constants are of the order of e^-92160000 and would underflow any float.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import __version__
from .bitstring import BitString, BlockDecomposition, Modulus, check_operand, decompose_blocks
from .block_model import (
    FUSED_T4_CARRIES,
    FUSED_T4_DIGIT,
    T1,
    T2,
    T3,
    T4,
    Segment,
    block_type,
    consolidate_unit_pairs,
    covariance,
    dist_given_both_carries,
    most_frequent_length,
    type4_cd,
)
from .errors import DegenerateAlpha, DegenerateEllipse, NoEligibleBlocks, OutOfRange, WrongTypes
from .exact_dp import exact_feasible, joint_distribution, shift_report_from
from .sampler import MonteCarloEstimate, bernoulli_estimate, estimate_fraction, rng_for, shard_plan

LOG_2_OVER_PI = math.log(2 / math.pi)
# fraction of long blocks below which unit pairs get fused
CONSOLIDATE_BELOW = Fraction(1, 100)


def _f(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class GaussianSummary:
    l: int
    L: int
    n: int
    cov_c: Fraction
    cov_d: Fraction

    @property
    def mg(self) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
        cl, dl = self.cov_c * self.l, self.cov_d * self.l
        return ((cl, dl), (dl, cl))

    @property
    def ratio_a(self) -> Fraction:
        return self.cov_d / self.cov_c

    @property
    def rhs_b(self) -> Fraction:
        c, d = self.cov_c, self.cov_d
        return 2 * (c * c - d * d) * self.l / c

    @property
    def axis_sq_major(self) -> Fraction:
        return 2 * (self.cov_c + self.cov_d) * self.l

    @property
    def axis_sq_minor(self) -> Fraction:
        return 2 * (self.cov_c - self.cov_d) * self.l

    @property
    def density_floor_log(self) -> float:
        return -math.log(math.pi * self.n) - 144 * self.n / self.l

    def as_dict(self) -> dict:
        return {
            "l": self.l,
            "L": self.L,
            "n": self.n,
            "cov_c": _f(self.cov_c),
            "cov_d": _f(self.cov_d),
            "mg": [[_f(v) for v in row] for row in self.mg],
            "ratio_a": _f(self.ratio_a),
            "rhs_b": _f(self.rhs_b),
            "axis_sq_major": _f(self.axis_sq_major),
            "axis_sq_minor": _f(self.axis_sq_minor),
            "density_floor_log": self.density_floor_log,
        }


def gaussian_summary(L: int, l: int, n: int) -> GaussianSummary:
    if L < 2 or l < 1 or n < l * L:
        raise OutOfRange(f"need L >= 2, l >= 1, n >= l*L; got L={L}, l={l}, n={n}")
    c, d = type4_cd(L)
    return GaussianSummary(l, L, n, c, d)


def rotated_ellipse_axes(a: Fraction, b: Fraction) -> tuple[Fraction, Fraction]:
    """Squared semi-axes of ``x^2 - 2axy + y^2 = b``.

    Returns ``(b/(1+a), b/(1-a))``: the first lies along y = -x, the second
    along y = x.
    """
    a, b = Fraction(a), Fraction(b)
    if not 0 <= a < 1:
        raise DegenerateEllipse(f"need 0 <= a < 1, got {a}")
    if b <= 0:
        raise DegenerateEllipse(f"need b > 0, got {b}")
    return b / (1 + a), b / (1 - a)


@dataclass(frozen=True)
class RemainderSummary:
    n: int
    C_sum: Fraction
    D_sum: Fraction
    total_length: int
    all_type1: bool
    radius: float
    mass_bound: Fraction

    @property
    def ellipse_axes_sq(self) -> tuple[Fraction, Fraction]:
        return 2 * (self.C_sum + self.D_sum), 2 * (self.C_sum - self.D_sum)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "C_sum": _f(self.C_sum),
            "D_sum": _f(self.D_sum),
            "total_length": self.total_length,
            "all_type1": self.all_type1,
            "radius": self.radius,
            "mass_bound": _f(self.mass_bound),
        }


def remainder_summary(blocks: Sequence[tuple[str, int, int]], n: int) -> RemainderSummary:
    """Summed covariance of the leftover T1/T4 blocks, as ``(type, digit, L)`` triples."""
    blocks = list(blocks)
    if any(tag not in (T1, T4) for tag, _, _ in blocks):
        raise WrongTypes("the remainder only holds T1 and T4 blocks")
    total = sum(L for _, _, L in blocks)
    if total > n:
        raise OutOfRange(f"remainder length {total} exceeds n = {n}")
    C = D = Fraction(0)
    for tag, digit, L in blocks:
        cov = covariance(digit, L, tag)
        C += cov.var_x
        D += cov.cov
    assert D <= C <= Fraction(n, 3)
    if not blocks:
        return RemainderSummary(n, C, D, 0, True, 0.0, Fraction(1))
    all_t1 = all(tag == T1 for tag, _, _ in blocks)
    radius = math.sqrt(n / 2) if all_t1 else math.sqrt(2 * n)
    return RemainderSummary(n, C, D, total, all_t1, radius, Fraction(1, 2))


def _law_arrays(tag: str, digit: int, L: int):
    cin = digit if tag == T1 else 1 - digit
    cout = digit if tag == T1 else cin ^ 1
    law = dist_given_both_carries(digit, L, cin, cout).support
    pts = sorted(law)
    probs = np.array([float(law[p]) for p in pts])
    return np.array(pts, dtype=np.int64), probs / probs.sum()


def remainder_mass(
    blocks: Sequence[tuple[str, int, int]], n: int, samples: int, seed: int, radius: float | None = None
) -> MonteCarloEstimate:
    """Sampled mass of the remainder within ``radius`` (Euclidean) of its mean."""
    summary = remainder_summary(blocks, n)
    r = summary.radius if radius is None else radius
    mean_x = sum(covariance(d, L, tag).mean_x for tag, d, L in blocks)
    mean_y = sum(covariance(d, L, tag).mean_y for tag, d, L in blocks)
    hits = 0
    for ss, size in shard_plan(samples, seed):
        rng = rng_for(ss)
        x = np.zeros(size, dtype=np.int64)
        y = np.zeros(size, dtype=np.int64)
        for tag, digit, L in blocks:
            if tag == T1:
                v = rng.binomial(L, 0.5, size)
                x += v
                y += v
            else:
                pts, probs = _law_arrays(tag, digit, L)
                idx = rng.choice(len(pts), size=size, p=probs)
                x += pts[idx, 0]
                y += pts[idx, 1]
        dx = x - float(mean_x)
        dy = y - float(mean_y)
        hits += int(np.count_nonzero(dx * dx + dy * dy <= r * r + 1e-9))
    return bernoulli_estimate(hits, samples, seed, "remainder_mass")


# ---------------------------------------------------------------- carries


@dataclass(frozen=True)
class _Unit:
    lo: int
    hi: int
    digit: int | None  # None for a fused pair
    pattern: str | None = None

    @property
    def length(self) -> int:
        return self.hi - self.lo + 1


def _segment_units(segments: Sequence[Segment], width: int) -> list[_Unit]:
    out = []
    top = width
    for seg in segments:
        lo = top - seg.length
        if seg.fused:
            out.append(_Unit(lo, top - 1, None, seg.bits))
        else:
            out.append(_Unit(lo, top - 1, int(seg.bits[0])))
        top = lo
    return out


def _eligible(units: Sequence[_Unit], consolidated: bool) -> list[_Unit]:
    if consolidated:
        return [u for u in units if u.digit is None]
    return [u for u in units if u.digit is not None and u.length >= 2]


def _t4_targets(units: Sequence[_Unit]) -> tuple[np.ndarray, np.ndarray]:
    """Carry (in, out) pair under which each eligible unit counts as type 4."""
    cin, cout = [], []
    for u in units:
        if u.digit is None:
            a, b = FUSED_T4_CARRIES[u.pattern]
        else:
            a, b = 1 - u.digit, u.digit  # nontrivial in, nontrivial out
        cin.append(a)
        cout.append(b)
    return np.array(cin, dtype=np.uint8), np.array(cout, dtype=np.uint8)


def sample_carries(alpha: BitString, rng: np.random.Generator, size: int) -> np.ndarray:
    """Carry into every bit position (column n is the carry out) for ``size`` uniform S."""
    n = alpha.width
    s = rng.integers(0, 2, size=(size, n), dtype=np.uint8)
    into = np.zeros((size, n + 1), dtype=np.uint8)
    carry = np.zeros(size, dtype=np.uint8)
    for i, a in enumerate(alpha.bits):
        total = s[:, i] + a + carry
        carry = total >> 1
        into[:, i + 1] = carry
    return into


@dataclass(frozen=True)
class ArrangementEstimate:
    eligible: int
    consolidated: bool
    probability: MonteCarloEstimate
    mean_type4: float
    p_nontrivial_in: float
    p_out_given_in: float
    min_p_nontrivial_in: float
    min_p_out_given_in: float

    def as_dict(self) -> dict:
        return {
            "eligible": self.eligible,
            "threshold": self.eligible / 4,
            "consolidated": self.consolidated,
            "probability": self.probability.estimate,
            "standard_error": self.probability.standard_error,
            "trials": self.probability.samples,
            "seed": self.probability.seed,
            "mean_type4": self.mean_type4,
            "p_nontrivial_in": self.p_nontrivial_in,
            "p_out_given_in": self.p_out_given_in,
            "min_p_nontrivial_in": self.min_p_nontrivial_in,
            "min_p_out_given_in": self.min_p_out_given_in,
        }


def _arrangement(alpha, units, consolidated, trials, seed):
    if trials < 1:
        raise ValueError("trials must be >= 1")
    eligible = _eligible(units, consolidated)
    if not eligible:
        raise NoEligibleBlocks("no blocks of length >= 2 (and no fused unit pairs)")
    lo = np.array([u.lo for u in eligible])
    hi = np.array([u.hi for u in eligible])
    want_in, want_out = _t4_targets(eligible)
    k = len(eligible)
    hits = 0
    total_t4 = 0
    in_hits = np.zeros(k, dtype=np.int64)
    both_hits = np.zeros(k, dtype=np.int64)
    chosen = None
    best = (-1, None)
    for ss, size in shard_plan(trials, seed):
        into = sample_carries(alpha, rng_for(ss), size)
        cin = into[:, lo]
        cout = into[:, hi + 1]
        ok_in = cin == want_in
        is_t4 = ok_in & (cout == want_out)
        count = is_t4.sum(axis=1)
        above = count > k / 4
        hits += int(above.sum())
        total_t4 += int(count.sum())
        in_hits += ok_in.sum(axis=0)
        both_hits += is_t4.sum(axis=0)
        if chosen is None and above.any():
            chosen = into[int(np.argmax(above))]
        j = int(np.argmax(count))
        if count[j] > best[0]:
            best = (int(count[j]), into[j])
    p_in = in_hits / trials
    with np.errstate(invalid="ignore", divide="ignore"):
        p_out = np.where(in_hits > 0, both_hits / np.maximum(in_hits, 1), np.nan)
    est = ArrangementEstimate(
        eligible=k,
        consolidated=consolidated,
        probability=bernoulli_estimate(hits, trials, seed, "type4_arrangement"),
        mean_type4=total_t4 / trials,
        p_nontrivial_in=float(in_hits.sum() / (trials * k)),
        p_out_given_in=float(both_hits.sum() / max(in_hits.sum(), 1)),
        min_p_nontrivial_in=float(p_in.min()),
        min_p_out_given_in=float(np.nanmin(p_out)) if np.isfinite(p_out).any() else float("nan"),
    )
    row = chosen if chosen is not None else best[1]
    return est, row


def _plan_units(blocks: BlockDecomposition, consolidate: bool | None):
    long_blocks = sum(1 for L in blocks.lengths if L >= 2)
    if consolidate is None:
        consolidate = long_blocks < CONSOLIDATE_BELOW * blocks.m
    if consolidate:
        pattern, fraction, segments = consolidate_unit_pairs(blocks)
    else:
        pattern, fraction = None, None
        segments = tuple(Segment(str(d) * L) for d, L in blocks.blocks)
    return consolidate, pattern, fraction, _segment_units(segments, blocks.width)


def type4_arrangement_probability(
    alpha_blocks: BlockDecomposition, trials: int, seed: int, consolidate: bool | None = None
) -> ArrangementEstimate:
    """Estimate Pr(more than a quarter of the eligible blocks are type 4).

    Eligible units are the blocks of length >= 2, or the fused unit pairs when
    consolidating (the default whenever under 1% of blocks are long).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    consolidated, _, _, units = _plan_units(alpha_blocks, consolidate)
    alpha = alpha_blocks.to_bitstring()
    est, _ = _arrangement(alpha, units, consolidated, trials, seed)
    return est


# ------------------------------------------------------------- walkthrough


@dataclass
class TheoremReport:
    alpha: str
    width: int
    modulus: str
    m: int
    long_blocks: int
    block_density: Fraction
    path: str
    consolidation: dict | None
    arrangement: ArrangementEstimate
    carry_word: str
    type_counts: dict
    chosen_L: int | None
    chosen_l: int | None
    gaussian: GaussianSummary | None
    remainder: RemainderSummary
    translation_k: Fraction
    predicted_quadrant_floor_log: float | None
    required_l: float
    theorem_constant_log: float
    final_bound_log: float
    measured_method: str
    measured_fraction: float
    measured_exact: Fraction | None = None
    measured_stderr: float | None = None
    bijection_balanced: bool | None = None
    config: dict = field(default_factory=dict)

    @property
    def measured_log(self) -> float:
        return math.log(self.measured_fraction) if self.measured_fraction > 0 else -math.inf

    @property
    def floor_respected(self) -> bool | None:
        if self.predicted_quadrant_floor_log is None:
            return None
        return self.predicted_quadrant_floor_log <= self.measured_log

    def as_dict(self) -> dict:
        return {
            "tool_version": __version__,
            "config": self.config,
            "alpha": self.alpha,
            "width": self.width,
            "modulus": self.modulus,
            "m": self.m,
            "long_blocks": self.long_blocks,
            "block_density": _f(self.block_density),
            "path": self.path,
            "consolidation": self.consolidation,
            "arrangement": self.arrangement.as_dict(),
            "carry_word": self.carry_word,
            "type_counts": self.type_counts,
            "chosen_L": self.chosen_L,
            "chosen_l": self.chosen_l,
            "gaussian": self.gaussian.as_dict() if self.gaussian else None,
            "remainder": self.remainder.as_dict(),
            "translation_k": _f(self.translation_k),
            "predicted_quadrant_floor_log": self.predicted_quadrant_floor_log,
            "required_l": self.required_l,
            "theorem_constant_log": self.theorem_constant_log,
            "final_bound_log": self.final_bound_log,
            "measured_method": self.measured_method,
            "measured_fraction": self.measured_fraction,
            "measured_exact": _f(self.measured_exact) if self.measured_exact is not None else None,
            "measured_stderr": self.measured_stderr,
            "measured_log": self.measured_log,
            "floor_respected": self.floor_respected,
            "bijection_balanced": self.bijection_balanced,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=1)


def theorem_constant_log(c: float) -> float:
    """log of (2/pi) e^{-92160000 / c^2}."""
    if c <= 0:
        raise OutOfRange("block density must be positive")
    return LOG_2_OVER_PI - 92160000 / (c * c)


def quadrant_floor_log(n: int, l: int) -> float:
    """log of (2/pi) e^{-144 n / l}."""
    return LOG_2_OVER_PI - 144 * n / l


def _realize(units, into):
    """Per-unit (tag, digit, L, k) for one carry fixing; unmatched fused pairs split back."""
    out = []
    for u in units:
        cin, cout = int(into[u.lo]), int(into[u.hi + 1])
        if u.digit is None:
            if (cin, cout) == FUSED_T4_CARRIES[u.pattern]:
                digit = FUSED_T4_DIGIT[u.pattern]
                out.append((T4, digit, 2, covariance(digit, 2, T4).translation_k))
                continue
            mid = int(into[u.lo + 1])
            for digit, a, b in ((int(u.pattern[0]), mid, cout), (int(u.pattern[1]), cin, mid)):
                tag = block_type(digit, 1, a, b)
                out.append((tag, digit, 1, covariance(digit, 1, tag).translation_k))
        else:
            tag = block_type(u.digit, u.length, cin, cout)
            out.append((tag, u.digit, u.length, covariance(u.digit, u.length, tag).translation_k))
    return out


def theorem_walkthrough(
    alpha: BitString,
    mod: Modulus,
    trials: int = 20000,
    seed: int = 0,
    mc_samples: int = 100000,
) -> TheoremReport:
    check_operand(alpha, mod, "alpha")
    blocks = decompose_blocks(alpha)
    if blocks.m < 2:
        raise DegenerateAlpha("alpha is constant (one block)")
    n = alpha.width
    m = blocks.m
    long_blocks = sum(1 for L in blocks.lengths if L >= 2)
    consolidated, pattern, fraction, units = _plan_units(blocks, None)
    arrangement, into = _arrangement(alpha, units, consolidated, trials, seed)

    realized = _realize(units, into)
    tags = Counter(tag for tag, _, _, _ in realized)
    t4_lengths = [L for tag, _, L, _ in realized if tag == T4]
    gaussian = None
    L = l = None
    if t4_lengths:
        L, l = most_frequent_length(t4_lengths, n)
        gaussian = gaussian_summary(L, l, n)
    rest = []
    taken = 0
    for tag, digit, length, _ in realized:
        if tag == T4 and length == L and taken < l:
            taken += 1
            continue
        if tag in (T1, T4):
            rest.append((tag, digit, length))
    remainder = remainder_summary(rest, n)
    translation = sum((k for _, _, _, k in realized), Fraction(0))

    density = Fraction(m, n)
    const_log = theorem_constant_log(float(density))
    report = TheoremReport(
        alpha=str(alpha),
        width=n,
        modulus=str(mod),
        m=m,
        long_blocks=long_blocks,
        block_density=density,
        path="consolidated" if consolidated else "type4-rich",
        consolidation={"pattern": pattern, "fraction": _f(fraction)} if consolidated else None,
        arrangement=arrangement,
        carry_word=format(int("".join(str(int(b)) for b in into[::-1]), 2), "x"),
        type_counts={t: tags.get(t, 0) for t in (T1, T2, T3, T4)},
        chosen_L=L,
        chosen_l=l,
        gaussian=gaussian,
        remainder=remainder,
        translation_k=translation,
        predicted_quadrant_floor_log=quadrant_floor_log(n, l) if l else None,
        required_l=float(density) ** 2 * n / 640000,
        theorem_constant_log=const_log,
        final_bound_log=const_log - math.log(12),
        measured_method="exact",
        measured_fraction=0.0,
        config={"trials": trials, "seed": seed, "mc_samples": mc_samples},
    )
    if exact_feasible(mod):
        sr = shift_report_from(joint_distribution(alpha, mod), alpha)
        report.measured_exact = sr.lth_fraction
        report.measured_fraction = float(sr.lth_fraction)
        report.bijection_balanced = sr.light_to_heavy == sr.heavy_to_light
    else:
        est = estimate_fraction(alpha, mod, mc_samples, seed)
        report.measured_method = "mc"
        report.measured_fraction = est.estimate
        report.measured_stderr = est.standard_error
    return report
