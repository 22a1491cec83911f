"""Named alpha families for scans: sparse-k, m blocks, periodic-p, random."""

from __future__ import annotations

import random

from .bitstring import BitString, alpha_with_blocks
from .errors import ParseError

FAMILIES = ("sparse", "blocks", "periodic", "random")


def sparse(k: int, n: int) -> BitString:
    """k ones spread evenly, the lowest at bit 0."""
    if not 0 <= k <= n:
        raise ParseError("family", f"sparse needs 0 <= k <= n, got k={k}, n={n}")
    value = 0
    for i in range(k):
        value |= 1 << (i * n // k)
    return BitString(n, value)


def blocks(m: int, n: int) -> BitString:
    """m alternating blocks of near-equal length, leading block of ones."""
    if not 1 <= m <= n:
        raise ParseError("family", f"blocks needs 1 <= m <= n, got m={m}, n={n}")
    base, extra = divmod(n, m)
    pattern = [((i + 1) % 2, base + (1 if i < extra else 0)) for i in range(m)]
    return alpha_with_blocks(pattern, n)


def periodic(p: int, n: int) -> BitString:
    """(1^ceil(p/2) 0^floor(p/2)) repeated and cut to n digits."""
    if p < 2:
        raise ParseError("family", f"periodic needs p >= 2, got {p}")
    unit = "1" * (-(-p // 2)) + "0" * (p // 2)
    digits = (unit * (n // p + 1))[:n]
    return BitString.from_str(digits)


def random_alpha(seed: int, n: int) -> BitString:
    rng = random.Random(seed)
    while True:
        value = rng.getrandbits(n)
        if value != (1 << n) - 1:
            return BitString(n, value)


def _params(text: str) -> list[str]:
    out = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        if "-" in part and part != "n" and not part.startswith("-"):
            lo, hi = part.split("-", 1)
            out.extend(str(v) for v in range(int(lo), int(hi) + 1))
        else:
            out.append(part)
    return out


def parse_family(spec: str) -> tuple[str, list[str]]:
    """``sparse:1-4``, ``blocks:n``, ``blocks:2,4,8``, ``periodic:2,4``, ``random:1,2,3``."""
    name, _, rest = spec.partition(":")
    if name not in FAMILIES:
        raise ParseError("family", f"unknown family {name!r}; expected one of {', '.join(FAMILIES)}")
    params = _params(rest)
    if not params:
        raise ParseError("family", f"family {spec!r} has no parameters")
    for p in params:
        if p == "n" and name == "blocks":
            continue
        try:
            int(p)
        except ValueError:
            raise ParseError("family", f"bad parameter {p!r} in {spec!r}") from None
    return name, params


def make_alpha(name: str, param: str, n: int) -> BitString:
    if name == "blocks" and param == "n":
        return blocks(n, n)
    value = int(param)
    return {"sparse": sparse, "blocks": blocks, "periodic": periodic, "random": random_alpha}[name](value, n)


def parse_grid(text: str) -> list[int]:
    """``16,32,64`` or ``16:64:16`` (inclusive); empty text is an empty grid."""
    text = text.strip()
    if not text:
        return []
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            start, stop = parts[0], parts[1]
            step = parts[2] if len(parts) > 2 else 1
            if step < 1:
                raise ValueError
            grid = list(range(start, stop + 1, step))
        else:
            grid = [int(p) for p in text.split(",") if p.strip()]
    except (ValueError, IndexError):
        raise ParseError("n-grid", f"cannot parse grid {text!r}") from None
    if any(v < 1 for v in grid):
        raise ParseError("n-grid", "widths must be positive")
    return grid
