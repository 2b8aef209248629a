import numpy as np
import pytest

from sigecc import codes
from sigecc.symbols import SymbolSpace


@pytest.fixture(scope="session")
def abs_opt_cb():
    """Bundled rate-4/7 codebook optimized for absolute difference."""
    return codes.reference_codebook("opt47_abs")


@pytest.fixture(scope="session")
def sq_opt_cb():
    """Bundled rate-4/7 codebook optimized for squared difference."""
    return codes.reference_codebook("opt47_sq")


@pytest.fixture(scope="session")
def twos_opt_cb():
    """Bundled two's-complement rate-4/7 codebook."""
    return codes.reference_codebook("opt47_sq_twos")


@pytest.fixture(scope="session")
def hamming74_cb():
    return codes.from_generator(codes.baseline_hamming_7_4(), SymbolSpace.unsigned(4))


def random_codebook(space, n, rng):
    """Random duplicate-free codebook for fuzz tests."""
    while True:
        words = rng.integers(0, 2, size=(space.m, n), dtype=np.uint8)
        if len({row.tobytes() for row in words}) == space.m:
            return codes.Codebook(space, words)


def noisy_corpus(cb, count, rng, sigmas=(0.3, 1.0, 2.5)):
    """Received vectors around random codewords at a mix of noise levels."""
    blocks = []
    per = count // len(sigmas)
    for sigma in sigmas:
        syms = rng.integers(cb.m, size=per)
        blocks.append(cb.modulated()[syms] + rng.normal(0.0, sigma, size=(per, cb.n)))
    rest = count - per * len(sigmas)
    if rest:
        blocks.append(rng.uniform(-2.0, 2.0, size=(rest, cb.n)))
    return np.vstack(blocks)
