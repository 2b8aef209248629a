"""Symbol-space loss functions.

A loss L(s_star, s) scores decoding the true symbol `s` as `s_star`.  The
first argument is always the decoded symbol; built-in kinds are symmetric but
table losses need not be.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .symbols import SymbolSpace

KINDS = ("abs", "sq", "weighted_bits", "table")


@dataclass(frozen=True, eq=False)
class LossSpec:
    """One of: absolute difference, squared difference, weighted bitwise
    difference, or an explicit m x m table indexed by symbol index."""

    kind: str
    weights: tuple[float, ...] | None = None
    entries: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown loss kind {self.kind!r}, expected one of {KINDS}")
        if self.kind == "weighted_bits":
            if not self.weights:
                raise ValueError("weighted_bits loss needs a weight per bit")
            if any(w < 0 for w in self.weights):
                raise ValueError("bit weights must be nonnegative")
        if self.kind == "table":
            t = self.entries
            if t is None or t.ndim != 2 or t.shape[0] != t.shape[1]:
                raise ValueError("table loss needs a square matrix")
            if np.any(t < 0):
                raise ValueError("loss table entries must be nonnegative")
            if np.any(np.diagonal(t) != 0):
                raise ValueError("loss table diagonal must be zero (L(s, s) = 0)")

    @classmethod
    def abs_diff(cls) -> "LossSpec":
        return cls(kind="abs")

    @classmethod
    def squared_diff(cls) -> "LossSpec":
        return cls(kind="sq")

    @classmethod
    def weighted_bits_loss(cls, weights) -> "LossSpec":
        """Sum of alpha_i over bits where the two symbols differ; weights are
        indexed from the least significant bit."""
        return cls(kind="weighted_bits", weights=tuple(float(w) for w in weights))

    @classmethod
    def from_table(cls, entries) -> "LossSpec":
        t = np.ascontiguousarray(np.asarray(entries, dtype=np.float64))
        t.flags.writeable = False
        return cls(kind="table", entries=t)

    @classmethod
    def zero_one(cls, m: int) -> "LossSpec":
        """0 on the diagonal, 1 elsewhere; its Bayes decoder is the posterior mode."""
        return cls.from_table(np.ones((m, m)) - np.eye(m))

    @classmethod
    def from_csv(cls, path) -> "LossSpec":
        return cls.from_table(np.loadtxt(path, delimiter=",", ndmin=2))

    def loss(self, space: SymbolSpace, s_star: int, s: int) -> float:
        """Loss of decoding true symbol value `s` as value `s_star`."""
        if self.kind == "table":
            return float(self.entries[space.index_of(s_star), space.index_of(s)])
        space.index_of(s_star)  # range validation
        space.index_of(s)
        if self.kind == "abs":
            return float(abs(int(s_star) - int(s)))
        if self.kind == "sq":
            return float((int(s_star) - int(s)) ** 2)
        # weighted_bits: compare the k-bit patterns, LSB-first weights
        if len(self.weights) != space.k:
            raise ValueError(
                f"need {space.k} bit weights, got {len(self.weights)}"
            )
        a = space.to_bits(s_star)[::-1].astype(np.int64)
        b = space.to_bits(s)[::-1].astype(np.int64)
        return float(np.dot(np.asarray(self.weights), np.abs(a - b)))

    def loss_table(self, space: SymbolSpace) -> np.ndarray:
        """(m, m) matrix with entry (i, j) = loss of decoding symbol j as i."""
        m = space.m
        if self.kind == "table":
            if self.entries.shape[0] != m:
                raise ValueError(
                    f"loss table is {self.entries.shape[0]}x{self.entries.shape[0]} "
                    f"but the space has m={m} symbols"
                )
            return np.array(self.entries, dtype=np.float64)
        vals = space.values().astype(np.float64)
        if self.kind == "abs":
            return np.abs(vals[:, None] - vals[None, :])
        if self.kind == "sq":
            return (vals[:, None] - vals[None, :]) ** 2
        if len(self.weights) != space.k:
            raise ValueError(f"need {space.k} bit weights, got {len(self.weights)}")
        bits = np.array([space.to_bits(v)[::-1] for v in space.values()], dtype=np.int64)
        diff = np.abs(bits[:, None, :] - bits[None, :, :])
        return diff.astype(np.float64) @ np.asarray(self.weights, dtype=np.float64)
