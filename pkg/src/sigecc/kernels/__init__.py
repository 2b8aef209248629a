"""Hot-loop kernels with backend selection at import time.

The compiled Cython extension (`_core`) is preferred when built; otherwise
the NumPy implementation (`_ref`) is used.  Set SIGECC_KERNELS=python or
SIGECC_KERNELS=compiled to force a backend.
"""

from __future__ import annotations

import os

import numpy as np

from . import _ref

try:
    from . import _core
except ImportError:
    _core = None


def _select():
    forced = os.environ.get("SIGECC_KERNELS", "").strip().lower()
    if forced in ("python", "numpy", "ref"):
        return _ref
    if forced in ("compiled", "c", "cython"):
        if _core is None:
            raise ImportError(
                "SIGECC_KERNELS requested the compiled kernels but the "
                "extension is not built; run `python setup.py build_ext --inplace`"
            )
        return _core
    if forced:
        raise ValueError(f"unknown SIGECC_KERNELS value {forced!r}")
    return _core if _core is not None else _ref


_impl = _select()


def backend_name() -> str:
    """Name of the backend selected at import ('compiled' or 'python')."""
    return "compiled" if _impl is _core else "python"


def available_backends() -> list[str]:
    return ["python"] + (["compiled"] if _core is not None else [])


def get_impl(name: str | None = None):
    """Fetch a specific backend module (for benchmarks and equivalence tests)."""
    if name is None:
        return _impl
    if name == "python":
        return _ref
    if name == "compiled":
        if _core is None:
            raise ValueError("compiled kernels are not built")
        return _core
    raise ValueError(f"unknown backend {name!r}")


def _u8(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.uint8)


def _f8(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.float64)


def pairwise_hamming(words) -> np.ndarray:
    return _impl.pairwise_hamming(_u8(words))


def fitness_many(pop, loss_table, kernel_lut, penalty: float) -> np.ndarray:
    return _impl.fitness_many(_u8(pop), _f8(loss_table), _f8(kernel_lut), float(penalty))


def objective(words, loss_table, kernel_lut) -> float:
    """Pair-sum objective of a single word matrix (no duplicate penalty)."""
    return float(
        _impl.fitness_many(_u8(words)[None, :, :], _f8(loss_table), _f8(kernel_lut), 0.0)[0]
    )


def hard_decode_many(received, words) -> np.ndarray:
    return _impl.hard_decode_many(_f8(received), _u8(words))


def soft_decode_many(received, mod_words) -> np.ndarray:
    return _impl.soft_decode_many(_f8(received), _f8(mod_words))


def posterior_many(received, mod_words, sigma: float) -> np.ndarray:
    return _impl.posterior_many(_f8(received), _f8(mod_words), float(sigma))


def bayes_decode_many(received, mod_words, loss_table, sigma: float) -> np.ndarray:
    return _impl.bayes_decode_many(
        _f8(received), _f8(mod_words), _f8(loss_table), float(sigma)
    )
