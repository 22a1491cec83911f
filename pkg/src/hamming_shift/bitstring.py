"""Fixed-width bit strings, addition in Z/2^n and Z/(2^n - 1), block decomposition.

A :class:`BitString` keeps its digits packed in a Python ``int`` whose bit ``i``
is the digit of weight ``2**i``, so the internal order is least-significant
first and widths of a million bits cost nothing special.  Text in and out is
always most-significant first.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .errors import (
    InvalidResidue,
    LengthMismatch,
    NonMaximalPattern,
    NotDivisible,
    OutOfRange,
    ParseError,
    WidthMismatch,
)


@dataclass(frozen=True)
class BitString:
    width: int
    value: int

    def __post_init__(self):
        if self.width < 1:
            raise OutOfRange(f"width must be positive, got {self.width}")
        if not 0 <= self.value < (1 << self.width):
            raise OutOfRange(f"value {self.value} does not fit in {self.width} bits")

    @classmethod
    def from_str(cls, text: str) -> BitString:
        """Parse a most-significant-first string of 0/1 digits."""
        if not text or set(text) - {"0", "1"}:
            raise ParseError("alpha", f"not a binary string: {text!r}")
        return cls(len(text), int(text, 2))

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> BitString:
        """Build from digits given least-significant first."""
        value = 0
        width = 0
        for i, b in enumerate(bits):
            if b not in (0, 1):
                raise OutOfRange(f"digit {b!r} at position {i}")
            value |= b << i
            width += 1
        return cls(width, value)

    @classmethod
    def zeros(cls, width: int) -> BitString:
        return cls(width, 0)

    @classmethod
    def ones(cls, width: int) -> BitString:
        return cls(width, (1 << width) - 1)

    @property
    def bits(self) -> tuple[int, ...]:
        """Digits least-significant first."""
        v = self.value
        return tuple((v >> i) & 1 for i in range(self.width))

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.width:
            raise IndexError(i)
        return (self.value >> i) & 1

    def __len__(self) -> int:
        return self.width

    def __str__(self) -> str:
        return format(self.value, f"0{self.width}b")

    @property
    def is_all_ones(self) -> bool:
        return self.value == (1 << self.width) - 1


class ModKind(str, Enum):
    POW2 = "pow2"
    POW2_MINUS_1 = "pow2m1"


@dataclass(frozen=True)
class Modulus:
    kind: ModKind
    width: int

    def __post_init__(self):
        object.__setattr__(self, "kind", ModKind(self.kind))
        if self.width < 1:
            raise OutOfRange("modulus width must be >= 1")
        if self.kind is ModKind.POW2_MINUS_1 and self.width < 2:
            raise OutOfRange("Z/(2^n - 1) needs n >= 2")

    @classmethod
    def pow2(cls, width: int) -> Modulus:
        return cls(ModKind.POW2, width)

    @classmethod
    def pow2m1(cls, width: int) -> Modulus:
        return cls(ModKind.POW2_MINUS_1, width)

    @property
    def order(self) -> int:
        """Number of group elements, i.e. the size of the uniform universe for S."""
        if self.kind is ModKind.POW2:
            return 1 << self.width
        return (1 << self.width) - 1

    def __str__(self) -> str:
        return self.kind.value


def hamming_weight(s: BitString) -> int:
    return s.value.bit_count()


def check_operand(s: BitString, mod: Modulus, name: str = "operand") -> None:
    if s.width != mod.width:
        raise WidthMismatch(f"{name} has width {s.width}, modulus has width {mod.width}")
    if mod.kind is ModKind.POW2_MINUS_1 and s.is_all_ones:
        raise InvalidResidue(f"{name} is all ones, which is not a residue mod 2^n - 1")


def add(s: BitString, alpha: BitString, mod: Modulus) -> BitString:
    """Return ``s + alpha`` in Z/2^n or Z/(2^n - 1).

    Residues mod 2^n - 1 are the strings 0 .. 2^n - 2.  An overflow out of the
    top bit is added back at the bottom; a sum that lands exactly on the
    all-ones string is the residue 0.
    """
    check_operand(s, mod, "s")
    check_operand(alpha, mod, "alpha")
    n = mod.width
    total = s.value + alpha.value
    if mod.kind is ModKind.POW2:
        return BitString(n, total & ((1 << n) - 1))
    order = (1 << n) - 1
    if total >= 1 << n:
        total = (total & order) + 1
    elif total == order:
        total = 0
    return BitString(n, total)


@dataclass(frozen=True)
class BlockDecomposition:
    """Maximal runs of equal digits, most-significant block first."""

    blocks: tuple[tuple[int, int], ...]
    width: int

    def __post_init__(self):
        if not self.blocks:
            raise OutOfRange("a decomposition needs at least one block")
        if sum(length for _, length in self.blocks) != self.width:
            raise LengthMismatch("block lengths do not sum to the width")
        for (d0, _), (d1, _) in zip(self.blocks, self.blocks[1:]):
            if d0 == d1:
                raise NonMaximalPattern("adjacent blocks share a digit")
        for digit, length in self.blocks:
            if digit not in (0, 1) or length < 1:
                raise OutOfRange(f"bad block ({digit}, {length})")

    @property
    def m(self) -> int:
        return len(self.blocks)

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(length for _, length in self.blocks)

    def spans(self) -> list[tuple[int, int, int, int]]:
        """Per block (MS first): ``(digit, length, low_bit, high_bit)`` bit positions."""
        out = []
        top = self.width
        for digit, length in self.blocks:
            out.append((digit, length, top - length, top - 1))
            top -= length
        return out

    def to_bitstring(self) -> BitString:
        return BitString.from_str("".join(str(d) * length for d, length in self.blocks))

    def __str__(self) -> str:
        return " ".join(str(d) * length for d, length in self.blocks)


def decompose_blocks(alpha: BitString) -> BlockDecomposition:
    text = str(alpha)
    blocks = [(int(m.group()[0]), len(m.group())) for m in re.finditer(r"0+|1+", text)]
    return BlockDecomposition(tuple(blocks), alpha.width)


def alpha_with_blocks(pattern: Sequence[tuple[int, int]], n: int) -> BitString:
    pattern = [(int(d), int(length)) for d, length in pattern]
    if sum(length for _, length in pattern) != n:
        raise LengthMismatch(f"pattern lengths sum to {sum(l for _, l in pattern)}, not {n}")
    for (d0, _), (d1, _) in zip(pattern, pattern[1:]):
        if d0 == d1:
            raise NonMaximalPattern("adjacent pattern entries share a digit")
    try:
        return BlockDecomposition(tuple(pattern), n).to_bitstring()
    except (OutOfRange, ParseError) as exc:
        raise NonMaximalPattern(str(exc)) from exc


def alpha_from_rational(a: int, b: int, q: int, n: int) -> BitString:
    """The n-bit string of ``(a * 2**n + b) / q``."""
    if q <= 1 or q % 2 == 0:
        raise OutOfRange(f"q must be odd and > 1, got {q}")
    if not (0 < abs(a) < q and 0 < abs(b) < q):
        raise OutOfRange("need 0 < |a|, |b| < q")
    num = a * (1 << n) + b
    if num % q:
        raise NotDivisible(f"{q} does not divide {a}*2^{n} + {b}")
    value = num // q
    if not 0 <= value < (1 << n) - 1:
        raise OutOfRange(f"({a}*2^{n} + {b})/{q} = {value} is outside [0, 2^{n} - 1)")
    return BitString(n, value)


def expand_pattern(text: str) -> str:
    """Expand ``(01)^8``-style repetition syntax into a plain binary string."""
    pos = 0

    def seq():
        nonlocal pos
        out = []
        while pos < len(text) and text[pos] != ")":
            if text[pos] == "(":
                pos += 1
                inner = seq()
                if pos >= len(text) or text[pos] != ")":
                    raise ParseError("alpha", f"unbalanced parenthesis in {text!r}")
                pos += 1
                atom = inner
            elif text[pos] in "01":
                atom = text[pos]
                pos += 1
            else:
                raise ParseError("alpha", f"unexpected {text[pos]!r} in pattern {text!r}")
            if pos < len(text) and text[pos] == "^":
                m = re.match(r"\^(\d+)", text[pos:])
                if not m:
                    raise ParseError("alpha", f"bad repetition count in {text!r}")
                pos += m.end()
                atom = atom * int(m.group(1))
            out.append(atom)
        return "".join(out)

    result = seq()
    if pos != len(text):
        raise ParseError("alpha", f"unbalanced parenthesis in {text!r}")
    return result


def parse_alpha(spec: str, width: int | None = None) -> BitString:
    """Parse any of the accepted textual forms of an addend.

    ``0b...`` binary, ``0x...`` hex, a decimal integer, ``rat:a,b,q`` and
    ``pat:(01)^8``.  ``width`` is required for decimal and rational forms and
    otherwise must agree with (or pad) the literal.
    """
    spec = spec.strip()
    if width is not None and width < 1:
        raise ParseError("n", f"width must be positive, got {width}")

    def fit(value: int, natural: int | None) -> BitString:
        w = width if width is not None else natural
        if w is None:
            raise ParseError("n", f"a width is required for {spec!r}")
        if value.bit_length() > w:
            raise ParseError("alpha", f"{spec!r} does not fit in {w} bits")
        return BitString(w, value)

    if spec.startswith("rat:"):
        if width is None:
            raise ParseError("n", "rational form needs an explicit width")
        try:
            a, b, q = (int(p) for p in spec[4:].split(","))
        except ValueError:
            raise ParseError("alpha", f"expected rat:a,b,q, got {spec!r}") from None
        return alpha_from_rational(a, b, q, width)
    if spec.startswith("pat:"):
        digits = expand_pattern(spec[4:])
        if not digits:
            raise ParseError("alpha", "empty pattern")
        if width is not None and len(digits) != width:
            raise ParseError("alpha", f"pattern has {len(digits)} digits, width is {width}")
        return BitString.from_str(digits)
    if spec.lower().startswith("0b"):
        digits = spec[2:].replace("_", "")
        if not digits or set(digits) - {"0", "1"}:
            raise ParseError("alpha", f"bad binary literal {spec!r}")
        return fit(int(digits, 2), len(digits))
    if spec.lower().startswith("0x"):
        digits = spec[2:].replace("_", "")
        try:
            value = int(digits, 16)
        except ValueError:
            raise ParseError("alpha", f"bad hex literal {spec!r}") from None
        return fit(value, 4 * len(digits))
    try:
        value = int(spec, 10)
    except ValueError:
        raise ParseError("alpha", f"unrecognised alpha format {spec!r}") from None
    if value < 0:
        raise ParseError("alpha", "alpha must be nonnegative")
    return fit(value, None)
