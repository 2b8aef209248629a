"""Symbol spaces: k-bit integer alphabets, unsigned or two's complement."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SymbolSpace:
    """An ordered alphabet of integer symbols with a fixed k-bit representation.

    Symbols are indexed by reading their bit pattern as an unsigned integer,
    so an unsigned space enumerates 0..2**k-1 and a two's-complement space
    enumerates 0..2**(k-1)-1 followed by -2**(k-1)..-1.  Custom alphabets with
    fewer than 2**k symbols can be built with `SymbolSpace.custom`.
    """

    k: int
    signed: bool = False
    explicit_values: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"bit width must be positive, got {self.k}")
        if self.explicit_values is not None:
            vals = self.explicit_values
            if len(vals) < 2:
                raise ValueError("a symbol space needs at least 2 symbols")
            if len(set(vals)) != len(vals):
                raise ValueError("explicit symbol values must be distinct")
            for v in vals:
                if not self._in_range(v):
                    raise ValueError(f"value {v} not representable in {self}")

    @classmethod
    def unsigned(cls, k: int) -> "SymbolSpace":
        return cls(k=k, signed=False)

    @classmethod
    def twos_complement(cls, k: int) -> "SymbolSpace":
        return cls(k=k, signed=True)

    @classmethod
    def custom(cls, k: int, values, signed: bool = False) -> "SymbolSpace":
        """Space over an explicit value list (any m >= 2, not only 2**k)."""
        return cls(k=k, signed=signed, explicit_values=tuple(int(v) for v in values))

    @property
    def m(self) -> int:
        """Number of symbols."""
        if self.explicit_values is not None:
            return len(self.explicit_values)
        return 1 << self.k

    @property
    def min_value(self) -> int:
        return -(1 << (self.k - 1)) if self.signed else 0

    @property
    def max_value(self) -> int:
        return (1 << (self.k - 1)) - 1 if self.signed else (1 << self.k) - 1

    def _in_range(self, value: int) -> bool:
        return self.min_value <= value <= self.max_value

    def to_bits(self, value: int) -> np.ndarray:
        """k-bit representation of `value`, most-significant bit first."""
        value = int(value)
        if not self._in_range(value):
            raise ValueError(
                f"value {value} out of range [{self.min_value}, {self.max_value}]"
            )
        pattern = value & ((1 << self.k) - 1)
        return np.array(
            [(pattern >> i) & 1 for i in range(self.k - 1, -1, -1)], dtype=np.uint8
        )

    def from_bits(self, bits) -> int:
        """Inverse of `to_bits`."""
        bits = np.asarray(bits)
        if bits.ndim != 1 or bits.shape[0] != self.k:
            raise ValueError(f"expected {self.k} bits, got shape {bits.shape}")
        pattern = 0
        for b in bits:
            pattern = (pattern << 1) | (int(b) & 1)
        if self.signed and pattern >= (1 << (self.k - 1)):
            pattern -= 1 << self.k
        return pattern

    def values(self) -> np.ndarray:
        """All symbol values in index order."""
        if self.explicit_values is not None:
            return np.array(self.explicit_values, dtype=np.int64)
        idx = np.arange(self.m, dtype=np.int64)
        if self.signed:
            half = 1 << (self.k - 1)
            return np.where(idx < half, idx, idx - (1 << self.k))
        return idx

    def value_at(self, index: int) -> int:
        if not 0 <= index < self.m:
            raise IndexError(f"symbol index {index} out of range for m={self.m}")
        return int(self.values()[index])

    def index_of(self, value: int) -> int:
        value = int(value)
        if self.explicit_values is not None:
            try:
                return self.explicit_values.index(value)
            except ValueError:
                raise ValueError(f"value {value} not in symbol space") from None
        if not self._in_range(value):
            raise ValueError(
                f"value {value} out of range [{self.min_value}, {self.max_value}]"
            )
        return value & ((1 << self.k) - 1)

    def index_bits(self) -> np.ndarray:
        """(m, k) matrix whose row i is the bit pattern of index i, MSB first."""
        idx = np.arange(self.m, dtype=np.int64)
        shifts = np.arange(self.k - 1, -1, -1)
        return ((idx[:, None] >> shifts[None, :]) & 1).astype(np.uint8)
