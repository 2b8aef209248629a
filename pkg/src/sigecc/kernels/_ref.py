"""NumPy implementations of the hot-loop kernels.

Mirrors `_core.pyx`; this module is the import-time fallback when the
compiled extension is unavailable.  Batched inputs are chunked so the
intermediate tensors stay within a fixed memory budget.
"""

from __future__ import annotations

import numpy as np

# rough cap on intermediate tensor entries per chunk
_CHUNK_BUDGET = 8_000_000


def pairwise_hamming(words: np.ndarray) -> np.ndarray:
    """(m, m) Hamming distances between the rows of an (m, n) bit matrix."""
    return (words[:, None, :] != words[None, :, :]).sum(axis=2, dtype=np.int32)


def fitness_many(
    pop: np.ndarray,
    loss_table: np.ndarray,
    kernel_lut: np.ndarray,
    penalty: float,
) -> np.ndarray:
    """Fitness of each (m, n) candidate in a (P, m, n) population.

    Fitness = sum over ordered pairs i != j of loss[i, j] * kernel_lut[d_H(i, j)]
    plus `penalty` per unordered duplicate-row pair.
    """
    P, m, n = pop.shape
    out = np.empty(P, dtype=np.float64)
    chunk = max(1, _CHUNK_BUDGET // max(1, m * m * n))
    for start in range(0, P, chunk):
        block = pop[start : start + chunk]
        dh = (block[:, :, None, :] != block[:, None, :, :]).sum(axis=3)
        v = (loss_table[None, :, :] * kernel_lut[dh]).sum(axis=(1, 2))
        dup = ((dh == 0).sum(axis=(1, 2)) - m) // 2
        out[start : start + chunk] = v + penalty * dup
    return out


def _reduced_sq_scores(received: np.ndarray, mod_words: np.ndarray) -> np.ndarray:
    # squared Euclidean distance minus the per-row constant ||y||^2; the
    # dropped term cancels in both the argmin and the posterior softmax
    wsq = (mod_words**2).sum(axis=1)
    return wsq[None, :] - 2.0 * received @ mod_words.T


def hard_decode_many(received: np.ndarray, words: np.ndarray) -> np.ndarray:
    """Per row: sign-quantize, then index of the Hamming-nearest codeword
    (ties to the lowest index)."""
    m, n = words.shape
    bits = received < 0
    wb = words.astype(bool)
    out = np.empty(received.shape[0], dtype=np.int64)
    chunk = max(1, _CHUNK_BUDGET // max(1, m * n))
    for start in range(0, received.shape[0], chunk):
        d = (bits[start : start + chunk, None, :] != wb[None, :, :]).sum(axis=2)
        out[start : start + chunk] = d.argmin(axis=1)
    return out


def soft_decode_many(received: np.ndarray, mod_words: np.ndarray) -> np.ndarray:
    """Per row: index of the Euclidean-nearest modulated codeword (ties to the
    lowest index)."""
    m = mod_words.shape[0]
    out = np.empty(received.shape[0], dtype=np.int64)
    chunk = max(1, _CHUNK_BUDGET // max(1, m))
    for start in range(0, received.shape[0], chunk):
        scores = _reduced_sq_scores(received[start : start + chunk], mod_words)
        out[start : start + chunk] = scores.argmin(axis=1)
    return out


def posterior_many(received: np.ndarray, mod_words: np.ndarray, sigma: float) -> np.ndarray:
    """(N, m) posterior over codewords for each received row: softmax of
    -d^2 / (2 sigma^2) with max-subtracted exponentials."""
    logits = -_reduced_sq_scores(received, mod_words) / (2.0 * sigma * sigma)
    logits -= logits.max(axis=1, keepdims=True)
    p = np.exp(logits)
    p /= p.sum(axis=1, keepdims=True)
    return p


def bayes_decode_many(
    received: np.ndarray,
    mod_words: np.ndarray,
    loss_table: np.ndarray,
    sigma: float,
) -> np.ndarray:
    """Per row: index minimizing the posterior expected loss over all m
    candidates (ties to the lowest index)."""
    m = mod_words.shape[0]
    out = np.empty(received.shape[0], dtype=np.int64)
    chunk = max(1, _CHUNK_BUDGET // max(1, 2 * m))
    for start in range(0, received.shape[0], chunk):
        p = posterior_many(received[start : start + chunk], mod_words, sigma)
        expected = p @ loss_table.T
        out[start : start + chunk] = expected.argmin(axis=1)
    return out
