"""Monte Carlo estimates of weight-transition statistics at large widths.

Samples are split into fixed-size shards, each driven by its own Philox
stream spawned from the user seed.  Shard boundaries depend only on the
sample count, never on the number of worker threads, so results replay
bit-for-bit however the shards are scheduled.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .bitstring import BitString, ModKind, Modulus, check_operand
from .exact_dp import JointWeightDistribution

GENERATOR = "numpy.random.Philox"
SHARD_SIZE = 1 << 16
WORD = 64
_ALL = np.uint64(0xFFFFFFFFFFFFFFFF)


@dataclass(frozen=True)
class MonteCarloEstimate:
    estimate: float
    standard_error: float
    samples: int
    hits: int
    seed: int
    quantity: str
    generator: str = GENERATOR
    shard_size: int = SHARD_SIZE

    def to_json(self, **meta) -> str:
        return json.dumps({**meta, **asdict(self)}, indent=1, sort_keys=True)


def bernoulli_estimate(hits: int, samples: int, seed: int, quantity: str) -> MonteCarloEstimate:
    p = hits / samples
    return MonteCarloEstimate(p, math.sqrt(p * (1 - p) / samples), samples, hits, seed, quantity)


def thread_count() -> int:
    env = os.environ.get("HAMMING_SHIFT_THREADS")
    cap = int(env) if env else (os.cpu_count() or 1)
    return max(1, cap)


def rng_for(seed) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def shard_plan(samples: int, seed: int) -> list[tuple[np.random.SeedSequence, int]]:
    if samples < 1:
        raise ValueError("samples must be >= 1")
    k = -(-samples // SHARD_SIZE)
    children = np.random.SeedSequence(seed).spawn(k)
    sizes = [SHARD_SIZE] * (k - 1) + [samples - SHARD_SIZE * (k - 1)]
    return list(zip(children, sizes))


def run_shards(fn, plan):
    workers = min(thread_count(), len(plan))
    if workers == 1:
        return [fn(ss, size) for ss, size in plan]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: fn(*job), plan))


def _to_words(value: int, n: int) -> np.ndarray:
    nwords = -(-n // WORD)
    return np.array([(value >> (WORD * j)) & 0xFFFFFFFFFFFFFFFF for j in range(nwords)], dtype=np.uint64)


def _top_mask(n: int) -> np.uint64:
    rem = n % WORD
    return _ALL if rem == 0 else np.uint64((1 << rem) - 1)


def draw_strings(rng: np.random.Generator, k: int, mod: Modulus) -> np.ndarray:
    """``k`` uniform residues as rows of little-endian 64-bit words."""
    n = mod.width
    nwords = -(-n // WORD)
    top = _top_mask(n)
    words = rng.bit_generator.random_raw((k, nwords)).astype(np.uint64)
    words[:, -1] &= top
    if mod.kind is ModKind.POW2_MINUS_1:
        full = _to_words((1 << n) - 1, n)
        while True:
            bad = np.flatnonzero((words == full).all(axis=1))
            if bad.size == 0:
                break
            redo = rng.bit_generator.random_raw((bad.size, nwords)).astype(np.uint64)
            redo[:, -1] &= top
            words[bad] = redo
    return words


def _ripple(words: np.ndarray, addend: np.ndarray, carry: np.ndarray, n: int):
    out = np.empty_like(words)
    for j in range(words.shape[1]):
        r = words[:, j] + addend[j]
        c1 = r < words[:, j]
        r2 = r + carry
        c2 = r2 < r
        out[:, j] = r2
        carry = (c1 | c2).astype(np.uint64)
    rem = n % WORD
    if rem:
        carry = (out[:, -1] >> np.uint64(rem)) & np.uint64(1)
        out[:, -1] &= np.uint64((1 << rem) - 1)
    return out, carry


def add_strings(words: np.ndarray, alpha: BitString, mod: Modulus) -> np.ndarray:
    """Vectorised ``s + alpha`` for every row of ``words``."""
    n = mod.width
    a = _to_words(alpha.value, n)
    zero = np.zeros(words.shape[0], dtype=np.uint64)
    out, carry = _ripple(words, a, zero, n)
    if mod.kind is ModKind.POW2:
        return out
    out, again = _ripple(out, np.zeros_like(a), carry, n)
    assert not again.any()
    full = _to_words((1 << n) - 1, n)
    out[(out == full).all(axis=1)] = 0
    return out


def weights(words: np.ndarray) -> np.ndarray:
    return np.bitwise_count(words).sum(axis=1, dtype=np.int64)


def _shard_pairs(alpha, mod, seed_seq, size):
    rng = rng_for(seed_seq)
    s = draw_strings(rng, size, mod)
    t = add_strings(s, alpha, mod)
    return weights(s), weights(t)


def shard_light_to_heavy(alpha: BitString, mod: Modulus, seed_seq, size: int) -> int:
    x, y = _shard_pairs(alpha, mod, seed_seq, size)
    n = mod.width
    return int(np.count_nonzero((2 * x <= n) & (2 * y > n)))


def shard_joint(alpha: BitString, mod: Modulus, seed_seq, size: int) -> np.ndarray:
    x, y = _shard_pairs(alpha, mod, seed_seq, size)
    n = mod.width
    return np.bincount(x * (n + 1) + y, minlength=(n + 1) ** 2)


def estimate_fraction(alpha: BitString, mod: Modulus, samples: int, seed: int) -> MonteCarloEstimate:
    """Frequency of light -> heavy transitions among ``samples`` uniform draws."""
    check_operand(alpha, mod, "alpha")
    plan = shard_plan(samples, seed)
    hits = sum(run_shards(lambda ss, size: shard_light_to_heavy(alpha, mod, ss, size), plan))
    return bernoulli_estimate(hits, samples, seed, "light_to_heavy")


def sample_joint(alpha: BitString, mod: Modulus, samples: int, seed: int) -> JointWeightDistribution:
    check_operand(alpha, mod, "alpha")
    n = mod.width
    plan = shard_plan(samples, seed)
    tally = sum(run_shards(lambda ss, size: shard_joint(alpha, mod, ss, size), plan))
    grid = tally.reshape(n + 1, n + 1)
    counts = tuple(tuple(int(c) for c in row) for row in grid)
    return JointWeightDistribution(n, mod, counts, sampled=True)


def total_variation(p: JointWeightDistribution, q: JointWeightDistribution) -> float:
    tp, tq = p.total, q.total
    return 0.5 * sum(
        abs(a / tp - b / tq)
        for row_p, row_q in zip(p.counts, q.counts)
        for a, b in zip(row_p, row_q)
    )
