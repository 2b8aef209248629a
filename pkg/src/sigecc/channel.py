"""Baseband BPSK over an additive white Gaussian noise channel."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codes import Codebook

# lower clamp for the blind variance estimate; keeps the Bayes posterior
# finite at very high SNR
VARIANCE_FLOOR = 1e-6


@dataclass(frozen=True)
class ChannelModel:
    """AWGN channel with noise standard deviation `sigma` per real dimension."""

    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")


def bpsk_modulate(bits) -> np.ndarray:
    """Map bits to unit-energy antipodal reals: 0 -> +1.0, 1 -> -1.0."""
    bits = np.asarray(bits)
    return 1.0 - 2.0 * bits.astype(np.float64)


def bpsk_quantize(signal) -> np.ndarray:
    """Sign-quantize reals back to bits (negative -> 1, else 0)."""
    return (np.asarray(signal) < 0).astype(np.uint8)


def transmit(model: ChannelModel, signal, rng: np.random.Generator) -> np.ndarray:
    """Add iid zero-mean Gaussian noise with variance sigma**2 per component."""
    signal = np.asarray(signal, dtype=np.float64)
    return signal + rng.normal(0.0, model.sigma, size=signal.shape)


def snr_db_to_sigma(snr_db: float) -> float:
    """Noise sigma for a per-coded-bit SNR in dB, with unit symbol energy.

    SNR_linear = 1 / sigma**2, so 0 dB corresponds to sigma = 1.
    """
    return float(np.sqrt(10.0 ** (-snr_db / 10.0)))


def codebook_bit_variance(cb: Codebook) -> float:
    """Population variance of the modulated codebook entries (equiprobable
    codewords, all m*n entries pooled)."""
    return float(np.var(cb.modulated()))


def estimate_noise_variance(received, cb: Codebook) -> float:
    """Blind noise-variance estimate from received words.

    Noise is uncorrelated with the transmitted signal, so the signal variance
    (the codebook bit variance under equiprobable codewords) can be subtracted
    from the variance of the pooled received reals.  Clamped below at
    VARIANCE_FLOOR.
    """
    received = np.asarray(received, dtype=np.float64)
    if received.size == 0:
        raise ValueError("need at least one received word to estimate the variance")
    return max(VARIANCE_FLOOR, float(np.var(received)) - codebook_bit_variance(cb))
