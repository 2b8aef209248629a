"""Codebooks, linear block codes and distance utilities.

A codebook is a bijection from the m symbols of a `SymbolSpace` to distinct
n-bit codewords, stored as an (m, n) bit matrix whose row i is the codeword
of symbol index i.  Linear codes are given by a full-rank k x n generator
matrix over GF(2).
"""

from __future__ import annotations

import warnings
from importlib import resources

import numpy as np

from .symbols import SymbolSpace


def _as_bit_matrix(arr, name: str) -> np.ndarray:
    mat = np.ascontiguousarray(np.asarray(arr, dtype=np.uint8))
    if mat.ndim != 2:
        raise ValueError(f"{name} must be a 2-D bit matrix, got ndim={mat.ndim}")
    if np.any(mat > 1):
        raise ValueError(f"{name} entries must be 0 or 1")
    return mat


def _as_bit_vector(bits) -> np.ndarray:
    if isinstance(bits, str):
        bits = [int(c) for c in bits.strip()]
    vec = np.asarray(bits, dtype=np.uint8)
    if vec.ndim != 1:
        raise ValueError(f"expected a 1-D bit vector, got shape {vec.shape}")
    if np.any(vec > 1):
        raise ValueError("bit vector entries must be 0 or 1")
    return vec


def hamming_distance(a, b) -> int:
    """Number of positions where two equal-length bit vectors differ."""
    a = _as_bit_vector(a)
    b = _as_bit_vector(b)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape[0]} vs {b.shape[0]}")
    return int(np.count_nonzero(a != b))


def gf2_rank(mat) -> int:
    """Rank of a 0/1 matrix over GF(2), by Gaussian elimination."""
    m = np.array(mat, dtype=np.uint8) % 2
    rows, cols = m.shape
    rank = 0
    for c in range(cols):
        pivot = None
        for r in range(rank, rows):
            if m[r, c]:
                pivot = r
                break
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        for r in range(rows):
            if r != rank and m[r, c]:
                m[r] ^= m[rank]
        rank += 1
        if rank == rows:
            break
    return rank


class Codebook:
    """Bijective map from symbol indices to distinct n-bit codewords."""

    def __init__(self, space: SymbolSpace, words):
        words = _as_bit_matrix(words, "codebook")
        if words.shape[0] != space.m:
            raise ValueError(
                f"codebook has {words.shape[0]} rows but the space has m={space.m}"
            )
        seen = {}
        for i in range(words.shape[0]):
            key = words[i].tobytes()
            if key in seen:
                raise ValueError(
                    f"duplicate codeword: rows {seen[key]} and {i} are identical"
                )
            seen[key] = i
        if words.shape[1] < space.k:
            warnings.warn(
                f"codeword length n={words.shape[1]} is below k={space.k}; "
                "the code removes information instead of adding redundancy",
                stacklevel=2,
            )
        words.flags.writeable = False
        self.space = space
        self.words = words
        self._index = seen
        # BPSK-modulated rows, cached for the decoders: bit 0 -> +1, 1 -> -1
        mod = 1.0 - 2.0 * words.astype(np.float64)
        mod.flags.writeable = False
        self._modulated = mod

    @property
    def m(self) -> int:
        return self.words.shape[0]

    @property
    def n(self) -> int:
        return self.words.shape[1]

    def encode(self, symbol_index: int) -> np.ndarray:
        """Codeword of the symbol at `symbol_index` (row of the word matrix)."""
        if not 0 <= symbol_index < self.m:
            raise IndexError(f"symbol index {symbol_index} out of range for m={self.m}")
        return self.words[symbol_index]

    def inverse_lookup(self, codeword) -> int:
        """Symbol index of an exact codeword; hash lookup, O(n) expected."""
        key = _as_bit_vector(codeword).tobytes()
        try:
            return self._index[key]
        except KeyError:
            raise KeyError("word is not a codeword of this codebook") from None

    def modulated(self) -> np.ndarray:
        """(m, n) matrix of BPSK-modulated codewords (+1/-1 reals)."""
        return self._modulated

    def __eq__(self, other):
        return (
            isinstance(other, Codebook)
            and self.space == other.space
            and np.array_equal(self.words, other.words)
        )

    def __repr__(self):
        sign = "twos_complement" if self.space.signed else "unsigned"
        return f"Codebook(m={self.m}, n={self.n}, {sign} k={self.space.k})"


class GeneratorMatrix:
    """Full-rank k x n generator matrix over GF(2)."""

    def __init__(self, entries):
        entries = _as_bit_matrix(entries, "generator matrix")
        k = entries.shape[0]
        if gf2_rank(entries) != k:
            raise ValueError(
                "generator matrix is rank-deficient over GF(2); "
                "the induced codebook would contain duplicate codewords"
            )
        entries.flags.writeable = False
        self.entries = entries

    @property
    def k(self) -> int:
        return self.entries.shape[0]

    @property
    def n(self) -> int:
        return self.entries.shape[1]

    def __eq__(self, other):
        return isinstance(other, GeneratorMatrix) and np.array_equal(
            self.entries, other.entries
        )

    def __repr__(self):
        return f"GeneratorMatrix(k={self.k}, n={self.n})"


def generator_codewords(entries: np.ndarray, m: int, k: int) -> np.ndarray:
    """(m, n) codeword matrix of a (possibly rank-deficient) generator:
    row i = (bits of index i) . G over GF(2)."""
    idx = np.arange(m, dtype=np.int64)
    shifts = np.arange(k - 1, -1, -1)
    x = ((idx[:, None] >> shifts[None, :]) & 1).astype(np.uint8)
    return ((x.astype(np.int64) @ entries.astype(np.int64)) % 2).astype(np.uint8)


def from_generator(gen: GeneratorMatrix, space: SymbolSpace) -> Codebook:
    """Codebook of the linear code: row i = (bits of index i) . G over GF(2)."""
    if space.k != gen.k:
        raise ValueError(f"space has k={space.k} but generator has k={gen.k}")
    words = generator_codewords(gen.entries, space.m, space.k)
    return Codebook(space, words)


def distance_profile(cb: Codebook) -> np.ndarray:
    """(num_pairs, 2) array of (|value_i - value_j|, hamming distance) over all
    unordered symbol pairs, using symbol values rather than indices."""
    vals = cb.space.values()
    words = cb.words
    iu, ju = np.triu_indices(cb.m, k=1)
    vdiff = np.abs(vals[iu] - vals[ju])
    dist = np.count_nonzero(words[iu] != words[ju], axis=1)
    return np.column_stack([vdiff, dist]).astype(np.int64)


def pairwise_distances(cb: Codebook) -> np.ndarray:
    """(m, m) matrix of pairwise codeword Hamming distances."""
    w = cb.words
    return np.count_nonzero(w[:, None, :] != w[None, :, :], axis=2).astype(np.int64)


# ---------------------------------------------------------------------------
# Baseline constructions


def baseline_hamming_7_4() -> GeneratorMatrix:
    """Systematic Hamming (7,4) generator [I4 | P]; minimum distance 3."""
    g = np.array(
        [
            [1, 0, 0, 0, 1, 1, 0],
            [0, 1, 0, 0, 1, 0, 1],
            [0, 0, 1, 0, 0, 1, 1],
            [0, 0, 0, 1, 1, 1, 1],
        ],
        dtype=np.uint8,
    )
    return GeneratorMatrix(g)


def baseline_hamming_12_8() -> GeneratorMatrix:
    """Shortened Hamming (12,8) generator [I8 | P]; single-error correcting.

    Built by shortening Hamming (15,11): keep 8 of the 11 data columns. The
    parity rows are the first eight 4-bit patterns of weight >= 2.
    """
    patterns = [p for p in range(16) if bin(p).count("1") >= 2][:8]
    parity = np.array(
        [[(p >> s) & 1 for s in range(3, -1, -1)] for p in patterns], dtype=np.uint8
    )
    g = np.hstack([np.eye(8, dtype=np.uint8), parity])
    return GeneratorMatrix(g)


def baseline_hadamard_8_3() -> Codebook:
    """Hadamard (8,3) codebook from the 8x8 Sylvester matrix (+1 -> 0, -1 -> 1);
    all pairwise distances equal 4."""
    h = np.array([[1]], dtype=np.int64)
    for _ in range(3):
        h = np.block([[h, h], [h, -h]])
    words = (h < 0).astype(np.uint8)
    return Codebook(SymbolSpace.unsigned(3), words)


# ---------------------------------------------------------------------------
# Text format
#
# One codeword per line as '0'/'1' characters, row order = symbol-index order,
# preceded by a header line "# k=<k> n=<n> signed=<0|1>".  Generator matrices
# use the same header with k rows.


def _format_header(k: int, n: int, signed: bool) -> str:
    return f"# k={k} n={n} signed={1 if signed else 0}"


def _parse_header(line: str, path: str) -> tuple[int, int, bool]:
    parts = line.lstrip("#").split()
    fields = {}
    for part in parts:
        key, _, val = part.partition("=")
        fields[key] = val
    try:
        k = int(fields["k"])
        n = int(fields["n"])
        signed = bool(int(fields["signed"]))
    except (KeyError, ValueError):
        raise ValueError(
            f"{path}:1: malformed header, expected '# k=<k> n=<n> signed=<0|1>'"
        ) from None
    return k, n, signed


def _parse_bit_rows(lines, n: int, path: str) -> np.ndarray:
    rows = []
    for lineno, raw in lines:
        row = raw.strip().replace(" ", "")
        if not row or row.startswith("#"):
            continue
        if len(row) != n or set(row) - {"0", "1"}:
            raise ValueError(
                f"{path}:{lineno}: expected {n} characters of 0/1, got {raw.strip()!r}"
            )
        rows.append([int(c) for c in row])
    return np.array(rows, dtype=np.uint8)


def codebook_to_text(cb: Codebook) -> str:
    lines = [_format_header(cb.space.k, cb.n, cb.space.signed)]
    lines.extend("".join(str(b) for b in row) for row in cb.words)
    return "\n".join(lines) + "\n"


def parse_codebook(text: str, path: str = "<codebook>") -> Codebook:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#"):
        raise ValueError(f"{path}:1: missing '# k=... n=... signed=...' header")
    k, n, signed = _parse_header(lines[0], path)
    words = _parse_bit_rows(enumerate(lines[1:], start=2), n, path)
    space = SymbolSpace(k=k, signed=signed)
    if words.shape[0] != space.m:
        raise ValueError(
            f"{path}: expected {space.m} codewords for k={k}, found {words.shape[0]}"
        )
    return Codebook(space, words)


def save_codebook(cb: Codebook, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(codebook_to_text(cb))


def load_codebook(path) -> Codebook:
    with open(path, "r", encoding="ascii") as fh:
        return parse_codebook(fh.read(), path=str(path))


def generator_to_text(gen: GeneratorMatrix, space: SymbolSpace) -> str:
    lines = [_format_header(gen.k, gen.n, space.signed)]
    lines.extend("".join(str(b) for b in row) for row in gen.entries)
    return "\n".join(lines) + "\n"


def parse_generator(text: str, path: str = "<generator>") -> tuple[GeneratorMatrix, SymbolSpace]:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#"):
        raise ValueError(f"{path}:1: missing '# k=... n=... signed=...' header")
    k, n, signed = _parse_header(lines[0], path)
    entries = _parse_bit_rows(enumerate(lines[1:], start=2), n, path)
    if entries.shape[0] != k:
        raise ValueError(f"{path}: expected {k} generator rows, found {entries.shape[0]}")
    return GeneratorMatrix(entries), SymbolSpace(k=k, signed=signed)


def save_generator(gen: GeneratorMatrix, space: SymbolSpace, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(generator_to_text(gen, space))


def load_generator(path) -> tuple[GeneratorMatrix, SymbolSpace]:
    with open(path, "r", encoding="ascii") as fh:
        return parse_generator(fh.read(), path=str(path))


# ---------------------------------------------------------------------------
# Bundled reference codes (search products, shipped for benchmarks and tests)

REFERENCE_CODEBOOKS = {
    # rate 4/7, unsigned symbols, optimized for absolute difference at sigma=1
    "opt47_abs": "opt47_abs.txt",
    # rate 4/7, unsigned symbols, optimized for squared difference at sigma=1
    "opt47_sq": "opt47_sq.txt",
    # rate 4/7, two's-complement symbols, optimized for squared difference
    "opt47_sq_twos": "opt47_sq_twos.txt",
}

REFERENCE_GENERATORS = {
    # rate 4/7 linear code optimized for squared difference at sigma=1
    "lin47_sq": "lin47_sq.txt",
    # rate 8/12 linear code optimized for squared difference at sigma=1
    "lin128_sq": "lin128_sq.txt",
}


def _read_data_file(filename: str) -> str:
    return resources.files("sigecc").joinpath("data", filename).read_text(encoding="ascii")


def reference_codebook(name: str) -> Codebook:
    """Load one of the bundled optimized codebooks by name."""
    try:
        filename = REFERENCE_CODEBOOKS[name]
    except KeyError:
        raise KeyError(
            f"unknown reference codebook {name!r}; available: {sorted(REFERENCE_CODEBOOKS)}"
        ) from None
    return parse_codebook(_read_data_file(filename), path=filename)


def reference_generator(name: str) -> tuple[GeneratorMatrix, SymbolSpace]:
    """Load one of the bundled optimized generator matrices by name."""
    try:
        filename = REFERENCE_GENERATORS[name]
    except KeyError:
        raise KeyError(
            f"unknown reference generator {name!r}; available: {sorted(REFERENCE_GENERATORS)}"
        ) from None
    return parse_generator(_read_data_file(filename), path=filename)
