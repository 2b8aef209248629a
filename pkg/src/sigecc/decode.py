"""Hard, soft and Bayes decoders for received real vectors.

All argmin ties break to the lowest symbol index so decoding is
deterministic.  The canonical Bayes decoder minimizes the posterior expected
loss by scanning all m candidates; the mean/median shortcuts for squared and
absolute losses are provided as validated fast paths.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .codes import Codebook
from .loss import LossSpec


@dataclass(frozen=True)
class DecodeMethod:
    """Decoder selector for simulations: 'hard', 'soft' or 'bayes' (the latter
    carries the loss the decoder optimizes; its sigma is supplied per run)."""

    kind: str
    loss: LossSpec | None = None

    def __post_init__(self):
        if self.kind not in ("hard", "soft", "bayes"):
            raise ValueError(f"unknown decoder kind {self.kind!r}")
        if self.kind == "bayes" and self.loss is None:
            raise ValueError("bayes decoding needs a loss")


def _as_received(c_prime, n: int) -> np.ndarray:
    vec = np.asarray(c_prime, dtype=np.float64)
    if vec.ndim != 1 or vec.shape[0] != n:
        raise ValueError(f"received vector must have length {n}, got shape {vec.shape}")
    return vec


def posterior(c_prime, cb: Codebook, sigma: float) -> np.ndarray:
    """Posterior probabilities over the m codewords given a received vector.

    probs[i] is proportional to exp(-||c' - modulated word i||^2 / (2 sigma^2));
    normalization uses max-subtracted exponentials for stability.
    """
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    vec = _as_received(c_prime, cb.n)
    return kernels.posterior_many(vec[None, :], cb.modulated(), sigma)[0]


def hard_decode(c_prime, cb: Codebook) -> int:
    """Sign-quantize, then return the index of the Hamming-nearest codeword."""
    vec = _as_received(c_prime, cb.n)
    return int(kernels.hard_decode_many(vec[None, :], cb.words)[0])


def soft_decode(c_prime, cb: Codebook) -> int:
    """Index of the Euclidean-nearest modulated codeword."""
    vec = _as_received(c_prime, cb.n)
    return int(kernels.soft_decode_many(vec[None, :], cb.modulated())[0])


def bayes_decode(c_prime, cb: Codebook, loss: LossSpec, sigma: float) -> int:
    """Index minimizing the posterior expected loss over all m candidates."""
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    vec = _as_received(c_prime, cb.n)
    table = loss.loss_table(cb.space)
    return int(kernels.bayes_decode_many(vec[None, :], cb.modulated(), table, sigma)[0])


def mean_decode(probs, values) -> int:
    """Index of the symbol value nearest the posterior mean; exact minimizer
    of expected squared loss on a discrete value grid (ties to lowest index)."""
    probs = np.asarray(probs, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    mean = float(probs @ values)
    return int(np.abs(values - mean).argmin())


def median_decode(probs, values) -> int:
    """Index of the lower weighted median: the smallest symbol value whose
    cumulative posterior (in increasing value order) reaches 0.5."""
    probs = np.asarray(probs, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    order = np.argsort(values, kind="stable")
    cdf = np.cumsum(probs[order])
    pos = int(np.searchsorted(cdf, 0.5, side="left"))
    pos = min(pos, len(values) - 1)  # guard cumulative rounding below 1.0
    return int(order[pos])


def bayes_decode_fast(c_prime, cb: Codebook, loss: LossSpec, sigma: float) -> int:
    """Shortcut Bayes decoder for the scalar losses.

    Squared difference decodes to the value nearest the posterior mean;
    absolute difference decodes to the lower weighted median.  The median may
    differ from `bayes_decode` on expected-loss ties (two's-complement index
    order breaks ties differently); the exhaustive decoder is authoritative.
    """
    if loss.kind not in ("abs", "sq"):
        raise ValueError(f"no fast path for loss kind {loss.kind!r}")
    probs = posterior(c_prime, cb, sigma)
    values = cb.space.values()
    if loss.kind == "sq":
        return mean_decode(probs, values)
    return median_decode(probs, values)


def decode_batch(
    received,
    cb: Codebook,
    method: DecodeMethod,
    sigma: float | None = None,
) -> np.ndarray:
    """Vectorized decoding of an (N, n) batch of received vectors."""
    received = np.asarray(received, dtype=np.float64)
    if received.ndim != 2 or received.shape[1] != cb.n:
        raise ValueError(f"expected an (N, {cb.n}) batch, got shape {received.shape}")
    if method.kind == "hard":
        return kernels.hard_decode_many(received, cb.words)
    if method.kind == "soft":
        return kernels.soft_decode_many(received, cb.modulated())
    if sigma is None or not sigma > 0:
        raise ValueError("bayes decoding needs a positive sigma")
    table = method.loss.loss_table(cb.space)
    return kernels.bayes_decode_many(received, cb.modulated(), table, sigma)
