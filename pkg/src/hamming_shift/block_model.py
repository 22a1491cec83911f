"""Per-block laws of (initial weight, final weight) under carry conditioning.

Blocks are indexed most-significant first, as in the block decomposition.
The carry *into* a block comes from its less significant neighbour (the
block after it in the list) and its carry *out* goes to the block before it.

A block's addition is *trivial* when the incoming carry makes it a no-op on
weights: digit 1 with carry 1 (``S + 1^L + 1 = S + 2^L``) or digit 0 with
carry 0.  Fixing both carries gives one of four types:

    T1  trivial -> nontrivial      diagonal binomial law
    T2  nontrivial -> trivial      point mass at (0, L) or (L, 0)
    T3  nontrivial -> nontrivial, L = 1   point mass
    T4  nontrivial -> nontrivial, L >= 2  the skewed law over 2^L - 1 strings
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence

from .bitstring import BitString, BlockDecomposition
from .errors import EmptyInput, InfeasibleCarries, InfeasibleType, InvalidLength, OutOfRange

T1, T2, T3, T4 = "T1", "T2", "T3", "T4"
TYPES = (T1, T2, T3, T4)


def _frac_str(p: Fraction) -> str:
    return f"{p.numerator}/{p.denominator}"


@dataclass(frozen=True)
class BlockDistribution:
    digit: int
    length: int
    carry_in: int
    carry_out: int | None
    type_tag: str | None
    support: Mapping[tuple[int, int], Fraction]

    def __post_init__(self):
        if sum(self.support.values()) != 1:
            raise AssertionError("block law does not sum to one")
        if any(p < 0 for p in self.support.values()):
            raise AssertionError("negative probability")

    def __getitem__(self, xy: tuple[int, int]) -> Fraction:
        return self.support.get(xy, Fraction(0))

    def swapped(self) -> dict[tuple[int, int], Fraction]:
        return {(y, x): p for (x, y), p in self.support.items()}

    def to_json(self) -> str:
        return json.dumps(
            {
                "digit": self.digit,
                "length": self.length,
                "carry_in": self.carry_in,
                "carry_out": self.carry_out,
                "type": self.type_tag,
                "support": [
                    {"x": x, "y": y, "p": _frac_str(p)} for (x, y), p in sorted(self.support.items())
                ],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> BlockDistribution:
        doc = json.loads(text)
        support = {(e["x"], e["y"]): Fraction(e["p"]) for e in doc["support"]}
        return cls(doc["digit"], doc["length"], doc["carry_in"], doc["carry_out"], doc["type"], support)


def _check_block(digit: int, length: int) -> None:
    if digit not in (0, 1):
        raise InvalidLength(f"digit must be 0 or 1, got {digit}")
    if length < 1:
        raise InvalidLength(f"block length must be positive, got {length}")


def _diagonal(length: int) -> dict:
    return {(x, x): Fraction(comb(length, x), 1 << length) for x in range(length + 1)}


def _skew_weights(length: int) -> dict:
    """Unnormalised law of the decrement S -> S - 1 over nonzero S (digit 1, carry 0, carry out 1)."""
    return {
        (x, y): comb(length - y + x - 2, x - 1)
        for x in range(1, length + 1)
        for y in range(x - 1, length)
    }


def _swap(law: dict) -> dict:
    return {(y, x): p for (x, y), p in law.items()}


def is_trivial(digit: int, carry_in: int) -> bool:
    return carry_in == digit


def dist_given_carry_in(digit: int, length: int, carry_in: int) -> BlockDistribution:
    _check_block(digit, length)
    if is_trivial(digit, carry_in):
        support = _diagonal(length)
    else:
        denom = 1 << length
        support = {xy: Fraction(w, denom) for xy, w in _skew_weights(length).items()}
        support[(0, length)] = Fraction(1, denom)
        if digit == 0:
            support = _swap(support)
    return BlockDistribution(digit, length, carry_in, None, None, support)


def block_type(digit: int, length: int, carry_in: int, carry_out: int) -> str:
    _check_block(digit, length)
    if is_trivial(digit, carry_in):
        if carry_out != digit:
            raise InfeasibleCarries(f"digit {digit} with trivial carry {carry_in} forces carry out {digit}")
        return T1
    # nontrivial: digit 1 with carry 0 computes S - 1 (+2^L unless S = 0);
    # digit 0 with carry 1 computes S + 1.
    if carry_out == carry_in:
        return T2
    return T3 if length == 1 else T4


def dist_given_both_carries(digit: int, length: int, carry_in: int, carry_out: int) -> BlockDistribution:
    tag = block_type(digit, length, carry_in, carry_out)
    if tag == T1:
        support = _diagonal(length)
    elif tag == T2:
        support = {(0, length): Fraction(1)}
    elif tag == T3:
        support = {(1, 0): Fraction(1)}
    else:
        denom = (1 << length) - 1
        support = {xy: Fraction(w, denom) for xy, w in _skew_weights(length).items()}
    if digit == 0 and tag != T1:
        support = _swap(support)
    return BlockDistribution(digit, length, carry_in, carry_out, tag, support)


def carry_out_probability(digit: int, length: int, carry_in: int, carry_out: int) -> Fraction:
    """Pr(carry out | carry in) for a uniform block."""
    _check_block(digit, length)
    if is_trivial(digit, carry_in):
        return Fraction(int(carry_out == digit))
    stay = Fraction(1, 1 << length)  # only S = 0 (digit 1) or S = 1^L (digit 0) keeps the carry
    return stay if carry_out == carry_in else 1 - stay


def trailing_zero_dist(length: int, x: int) -> dict[int, Fraction]:
    """Law of the number of trailing zeros of a uniform L-bit string of weight x."""
    if length < 1 or not 0 <= x <= length:
        raise OutOfRange(f"need 0 <= x <= L, got L={length}, x={x}")
    if x == 0:
        return {length: Fraction(1)}
    total = comb(length, x)
    return {z: Fraction(comb(length - z - 1, x - 1), total) for z in range(length - x + 1)}


@dataclass(frozen=True)
class CovarianceSummary:
    length: int
    type_tag: str
    digit: int
    var_x: Fraction
    var_y: Fraction
    cov: Fraction
    mean_x: Fraction
    mean_y: Fraction
    translation_k: Fraction

    def as_dict(self) -> dict:
        return {
            "length": self.length,
            "type": self.type_tag,
            "digit": self.digit,
            **{
                k: _frac_str(getattr(self, k))
                for k in ("var_x", "var_y", "cov", "mean_x", "mean_y", "translation_k")
            },
        }


def type4_cd(length: int) -> tuple[Fraction, Fraction]:
    """Closed-form variance ``c`` and covariance ``d`` of the T4 law."""
    if length < 2:
        raise InfeasibleType("T4 needs L >= 2")
    inv = Fraction(1, (1 << length) - 1)
    boost = 1 + inv
    c = Fraction(length, 4) * boost - Fraction(length * length, 4) * boost * inv
    d = Fraction(length, 4) * boost + Fraction(length * length, 4) * boost * inv - 1
    return c, d


def type4_moments(length: int) -> dict[str, Fraction]:
    """Closed forms of E[X], E[X^2], E[XY] for the digit-1 T4 law."""
    if length < 2:
        raise InfeasibleType("T4 needs L >= 2")
    boost = Fraction(1 << length, (1 << length) - 1)
    return {
        "EX": Fraction(length, 2) * boost,
        "EX2": Fraction(length * (length + 1), 4) * boost,
        "EXY": Fraction(length * length + length, 4) * boost - 1,
    }


def covariance(digit: int, length: int, type_tag: str) -> CovarianceSummary:
    _check_block(digit, length)
    half = Fraction(length, 2)
    sign = 1 if digit == 1 else -1
    zero = Fraction(0)
    if type_tag == T1:
        v = Fraction(length, 4)
        return CovarianceSummary(length, T1, digit, v, v, v, half, half, zero)
    if type_tag == T2:
        k = -sign * half
        return CovarianceSummary(length, T2, digit, zero, zero, zero, half + k, half - k, k)
    if type_tag == T3:
        if length != 1:
            raise InfeasibleType("T3 requires L = 1")
        k = Fraction(sign, 2)
        return CovarianceSummary(length, T3, digit, zero, zero, zero, half + k, half - k, k)
    if type_tag == T4:
        c, d = type4_cd(length)
        k = sign * half / ((1 << length) - 1)
        return CovarianceSummary(length, T4, digit, c, c, d, half + k, half - k, k)
    raise InfeasibleType(f"unknown type {type_tag!r}")


def moments(support: Mapping[tuple[int, int], Fraction]) -> dict[str, Fraction]:
    """Exact moments of a finite law on weight pairs."""
    ex = sum(p * x for (x, _), p in support.items())
    ey = sum(p * y for (_, y), p in support.items())
    ex2 = sum(p * x * x for (x, _), p in support.items())
    ey2 = sum(p * y * y for (_, y), p in support.items())
    exy = sum(p * x * y for (x, y), p in support.items())
    return {
        "EX": ex,
        "EY": ey,
        "EX2": ex2,
        "EXY": exy,
        "var_x": ex2 - ex * ex,
        "var_y": ey2 - ey * ey,
        "cov": exy - ex * ey,
    }


@dataclass(frozen=True)
class CarryFixing:
    """Realized (carry_in, carry_out) for every block, most-significant block first."""

    blocks: BlockDecomposition
    carries: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if len(self.carries) != self.blocks.m:
            raise InfeasibleCarries("one carry pair per block is required")
        for (cin, _), (_, cout_next) in zip(self.carries, self.carries[1:]):
            if cin != cout_next:
                raise InfeasibleCarries("carry into a block must equal carry out of its lower neighbour")

    @classmethod
    def from_sample(cls, blocks: BlockDecomposition, s: BitString) -> CarryFixing:
        """Carries realized when ``s`` is added to the string the blocks spell (mod 2^n)."""
        alpha = blocks.to_bitstring().value
        total = s.value + alpha
        into = total ^ s.value ^ alpha  # bit i: carry into position i; bit n: carry out
        return cls.from_carry_word(blocks, into)

    @classmethod
    def from_carry_word(cls, blocks: BlockDecomposition, into: int) -> CarryFixing:
        carries = tuple(
            ((into >> lo) & 1, (into >> (hi + 1)) & 1) for _, _, lo, hi in blocks.spans()
        )
        return cls(blocks, carries)


def classify_blocks(blocks: BlockDecomposition, carries: CarryFixing) -> tuple[tuple[str, ...], Counter]:
    if carries.blocks.blocks != blocks.blocks:
        raise InfeasibleCarries("carry fixing belongs to a different decomposition")
    tags = tuple(
        block_type(digit, length, cin, cout)
        for (digit, length), (cin, cout) in zip(blocks.blocks, carries.carries)
    )
    return tags, Counter(tags)


def most_frequent_length(lengths: Sequence[int], n: int) -> tuple[int, int]:
    """Most common length; ties go to the shorter length."""
    if not lengths:
        raise EmptyInput("no lengths given")
    if any(length < 1 for length in lengths):
        raise OutOfRange("lengths must be positive")
    if sum(lengths) > n:
        raise OutOfRange(f"lengths sum to {sum(lengths)} > n = {n}")
    counts = Counter(lengths)
    best = min(counts, key=lambda length: (-counts[length], length))
    return best, counts[best]


@dataclass(frozen=True)
class Segment:
    """A block, or two unit blocks fused into one length-2 pseudo-block."""

    bits: str  # most-significant first
    fused: bool = False

    @property
    def length(self) -> int:
        return len(self.bits)


# Carries under which a fused unit pair behaves like a length-2 T4 block:
# "01" + s with no carry either way is the digit-0 T4 law at L = 2,
# "10" + s with carry 1 in and out is the digit-1 T4 law at L = 2.
FUSED_T4_CARRIES = {"01": (0, 0), "10": (1, 1)}
FUSED_T4_DIGIT = {"01": 0, "10": 1}


def consolidate_unit_pairs(blocks: BlockDecomposition) -> tuple[str, Fraction, tuple[Segment, ...]]:
    """Pair blocks (1,2), (3,4), ... and fuse unit pairs of the majority pattern."""
    pairs = [blocks.blocks[i:i + 2] for i in range(0, blocks.m - 1, 2)]
    votes = Counter()
    for (d0, l0), (d1, l1) in pairs:
        if l0 == 1 and l1 == 1:
            votes[f"{d0}{d1}"] += 1
    pattern = "01" if votes["01"] >= votes["10"] else "10"
    fraction = Fraction(votes[pattern], len(pairs)) if pairs else Fraction(0)
    segments: list[Segment] = []
    for i in range(0, blocks.m, 2):
        chunk = blocks.blocks[i:i + 2]
        if len(chunk) == 2 and all(length == 1 for _, length in chunk) and f"{chunk[0][0]}{chunk[1][0]}" == pattern:
            segments.append(Segment(pattern, fused=True))
        else:
            segments.extend(Segment(str(d) * length) for d, length in chunk)
    return pattern, fraction, tuple(segments)


def fused_pair_law(pattern: str, carry_in: int, carry_out: int) -> dict[tuple[int, int], Fraction]:
    """Law of a two-digit addend with given carries, by enumerating the four S values."""
    a = int(pattern, 2)
    hits = Counter()
    for s in range(4):
        total = s + a + carry_in
        if total >> 2 == carry_out:
            hits[(s.bit_count(), (total & 3).bit_count())] += 1
    n = sum(hits.values())
    if not n:
        raise InfeasibleCarries(f"pattern {pattern} cannot realize carries ({carry_in}, {carry_out})")
    return {xy: Fraction(c, n) for xy, c in hits.items()}


def block_laws_from_tally(tally: Mapping[tuple[int, int, int], int]) -> dict[int, dict]:
    """Split an ``(x, y, carry_out)`` tally into normalised laws per carry out."""
    out: dict[int, dict] = {}
    for cout in (0, 1):
        part = {(x, y): c for (x, y, co), c in tally.items() if co == cout}
        total = sum(part.values())
        if total:
            out[cout] = {xy: Fraction(c, total) for xy, c in part.items()}
    return out


def mix(laws: Iterable[tuple[Fraction, Mapping]]) -> dict:
    out: dict = {}
    for w, law in laws:
        for xy, p in law.items():
            out[xy] = out.get(xy, Fraction(0)) + w * p
    return {xy: p for xy, p in out.items() if p}
