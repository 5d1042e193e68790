"""Two's-complement fixed-point formats written as ``(signed, width, frac)``."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ArgumentError, RangeError

__all__ = ["FixedPointFormat", "round_shift"]


def round_shift(value: int, shift: int) -> int:
    """``value / 2**shift`` rounded to nearest, ties to even."""
    if shift <= 0:
        return value << -shift
    q, r = divmod(value, 1 << shift)
    half = 1 << (shift - 1)
    if r > half or (r == half and q & 1):
        q += 1
    return q


@dataclass(frozen=True)
class FixedPointFormat:
    signed: bool
    width: int
    frac: int

    def __post_init__(self):
        object.__setattr__(self, "signed", bool(self.signed))
        if not (1 <= self.width <= 64 and 0 <= self.frac <= self.width):
            raise ArgumentError(f"invalid fixed-point format {self}: need 0 <= F <= W <= 64")

    @classmethod
    def parse(cls, text: str) -> "FixedPointFormat":
        """Read ``"S:W:F"``, e.g. ``"1:32:27"``."""
        try:
            s, w, f = (int(part) for part in text.split(":"))
        except ValueError:
            raise ArgumentError(f"fixed-point format must look like S:W:F, got {text!r}") from None
        if s not in (0, 1):
            raise ArgumentError(f"sign flag must be 0 or 1, got {s}")
        return cls(bool(s), w, f)

    def __str__(self):
        return f"{int(self.signed)}:{self.width}:{self.frac}"

    @property
    def min_word(self) -> int:
        return -(1 << (self.width - 1)) if self.signed else 0

    @property
    def max_word(self) -> int:
        return (1 << (self.width - 1)) - 1 if self.signed else (1 << self.width) - 1

    @property
    def lsb(self) -> float:
        return math.ldexp(1.0, -self.frac)

    @property
    def min_value(self) -> float:
        return self.to_real(self.min_word)

    @property
    def max_value(self) -> float:
        return self.to_real(self.max_word)

    def fits(self, word: int) -> bool:
        return self.min_word <= word <= self.max_word

    def saturate(self, word: int) -> int:
        return min(max(word, self.min_word), self.max_word)

    def round_word(self, x: float) -> int:
        """Nearest word to ``x`` (ties to even), without range checking."""
        if not math.isfinite(x):
            raise RangeError(f"cannot quantize non-finite value {x!r}")
        return round(math.ldexp(x, self.frac))

    def quantize(self, x: float) -> int:
        return self.saturate(self.round_word(x))

    def quantize_strict(self, x: float) -> int:
        w = self.round_word(x)
        if not self.fits(w):
            raise RangeError(f"{x!r} does not fit format {self} "
                             f"[{self.min_value!r}, {self.max_value!r}]")
        return w

    def ceil_word(self, x: float) -> int:
        """Smallest word whose value is ``>= x``."""
        return math.ceil(math.ldexp(x, self.frac))

    def floor_word(self, x: float) -> int:
        return math.floor(math.ldexp(x, self.frac))

    def to_real(self, word: int) -> float:
        return math.ldexp(float(word), -self.frac)

    def to_bits(self, word: int) -> int:
        """Raw ``width``-bit pattern of ``word`` (two's complement)."""
        if not self.fits(word):
            raise RangeError(f"word {word} outside format {self}")
        return word & ((1 << self.width) - 1)

    def from_bits(self, bits: int) -> int:
        bits &= (1 << self.width) - 1
        if self.signed and bits >> (self.width - 1):
            bits -= 1 << self.width
        return bits

    @classmethod
    def fitting(cls, max_abs: float, width: int = 32, signed: bool = True) -> "FixedPointFormat":
        """Format of ``width`` bits with the most fraction bits that still holds ``max_abs``."""
        if not math.isfinite(max_abs):
            raise RangeError(f"cannot size a format for {max_abs!r}")
        avail = width - int(signed)
        for frac in range(min(avail, width), -1, -1):
            fmt = cls(signed, width, frac)
            if fmt.fits(fmt.round_word(max_abs)) and fmt.fits(fmt.round_word(-max_abs) if signed else 0):
                return fmt
        raise RangeError(f"{max_abs!r} does not fit any {width}-bit format")

    @property
    def hex_digits(self) -> int:
        return -(-self.width // 4)

    def to_hex(self, word: int) -> str:
        return f"{self.to_bits(word):0{self.hex_digits}X}"
