"""Brute-force references.

Nothing here calls :func:`hamming_shift.bitstring.add` or the carry DP: the
whole point is to be a second, dumb route to the same numbers.
"""

from __future__ import annotations

from collections import Counter

import numpy as np

from .bitstring import BitString, ModKind, Modulus
from .errors import InvalidResidue, TooWide, WidthMismatch
from .exact_dp import JointWeightDistribution

MAX_ORACLE_WIDTH = 24
MAX_BLOCK_LENGTH = 20


def _residues(mod: Modulus) -> np.ndarray:
    return np.arange(mod.order, dtype=np.uint64)


def _translate(s: np.ndarray, a: int, mod: Modulus) -> np.ndarray:
    # plain integer add, then reduce
    if mod.kind is ModKind.POW2:
        return (s + np.uint64(a)) % np.uint64(1 << mod.width)
    return (s + np.uint64(a)) % np.uint64((1 << mod.width) - 1)


def brute_force_joint(alpha: BitString, mod: Modulus) -> JointWeightDistribution:
    n = mod.width
    if n > MAX_ORACLE_WIDTH:
        raise TooWide(f"oracle enumeration is limited to n <= {MAX_ORACLE_WIDTH}, got {n}")
    if alpha.width != n:
        raise WidthMismatch("alpha and modulus widths differ")
    if mod.kind is ModKind.POW2_MINUS_1 and alpha.is_all_ones:
        raise InvalidResidue("alpha is all ones")
    s = _residues(mod)
    t = _translate(s, alpha.value, mod)
    x = np.bitwise_count(s).astype(np.int64)
    y = np.bitwise_count(t).astype(np.int64)
    tally = np.bincount(x * (n + 1) + y, minlength=(n + 1) ** 2).reshape(n + 1, n + 1)
    counts = tuple(tuple(int(c) for c in row) for row in tally)
    return JointWeightDistribution(n, mod, counts)


def brute_force_block(digit: int, length: int, carry_in: int) -> Counter:
    """Tally ``(x, y, carry_out)`` over all 2^L block values added to digit^L.

    Addition is done digit by digit with an explicit ripple carry.
    """
    if length > MAX_BLOCK_LENGTH:
        raise TooWide(f"block enumeration is limited to L <= {MAX_BLOCK_LENGTH}")
    if length < 1:
        raise ValueError("block length must be positive")
    tally = Counter()
    for s in range(1 << length):
        carry = carry_in
        x = y = 0
        for i in range(length):
            bit = (s >> i) & 1
            total = bit + digit + carry
            x += bit
            y += total & 1
            carry = total >> 1
        tally[(x, y, carry)] += 1
    return tally


def modulus_gap(alpha: BitString) -> dict:
    """Exact set comparison of light-to-heavy strings under the two moduli.

    Over the residues s = 0 .. 2^n - 2, counts strings that go light to heavy
    mod 2^n - 1 but not mod 2^n (``gained``) and the reverse (``lost``).
    ``pow2_extra`` is the light-to-heavy contribution of the all-ones string,
    which only exists mod 2^n.
    """
    n = alpha.width
    if n > MAX_ORACLE_WIDTH:
        raise TooWide(f"n <= {MAX_ORACLE_WIDTH} required")
    if alpha.is_all_ones:
        raise InvalidResidue("alpha is all ones")
    s = np.arange(1 << n, dtype=np.uint64)
    light_s = 2 * np.bitwise_count(s).astype(np.int64) <= n
    t2 = _translate(s, alpha.value, Modulus.pow2(n))
    lth2 = light_s & (2 * np.bitwise_count(t2).astype(np.int64) > n)
    s1 = s[:-1]
    t1 = _translate(s1, alpha.value, Modulus.pow2m1(n))
    lth1 = light_s[:-1] & (2 * np.bitwise_count(t1).astype(np.int64) > n)
    return {
        "gained": int(np.count_nonzero(lth1 & ~lth2[:-1])),
        "lost": int(np.count_nonzero(~lth1 & lth2[:-1])),
        "pow2_extra": int(lth2[-1]),
        "pow2_lth": int(np.count_nonzero(lth2)),
        "pow2m1_lth": int(np.count_nonzero(lth1)),
    }
