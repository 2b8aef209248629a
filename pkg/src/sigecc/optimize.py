"""Codebook search: pair-sum objective, genetic algorithm and hill climbing.

The objective of a codebook is

    v = sum over ordered symbol pairs i != j of
        loss(value_i, value_j) * exp(-d_H(word_i, word_j) / (2 sigma^2)),

a codebook-sampled estimate of the mean symbol error on the AWGN channel at
the design sigma.  Search candidates may contain duplicate codewords; a
dominating penalty per duplicate pair keeps them out of the final result.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .codes import Codebook, GeneratorMatrix, generator_codewords, gf2_rank
from .loss import LossSpec
from .symbols import SymbolSpace

TOURNAMENT_SIZE = 2


class SearchFailure(RuntimeError):
    """Raised when a search cannot produce a valid (duplicate-free) result."""


@dataclass(frozen=True)
class FitnessConfig:
    """Loss and design sigma for the objective, plus the duplicate penalty
    (None picks m**2 * max loss entry, which dominates any achievable v)."""

    loss: LossSpec
    sigma: float
    duplicate_penalty: float | None = None

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")


@dataclass(frozen=True)
class SearchConfig:
    algorithm: str = "ga"  # "ga" | "hill_climb"
    population_size: int = 200
    generations: int = 2000
    crossover_rate: float = 0.9
    mutation_rate: float = 0.3
    elitism_count: int = 2
    mutation_op: str = "swap"  # "swap" | "flip"
    restarts: int = 20
    seed: int = 0

    def __post_init__(self):
        if self.algorithm not in ("ga", "hill_climb"):
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.algorithm == "ga" and self.population_size < 2:
            raise ValueError("GA needs a population of at least 2")
        for name in ("crossover_rate", "mutation_rate"):
            rate = getattr(self, name)
            if not 0.0 <= rate <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {rate}")
        if self.mutation_op not in ("swap", "flip"):
            raise ValueError(f"unknown mutation_op {self.mutation_op!r}")
        if not 0 <= self.elitism_count < max(2, self.population_size):
            raise ValueError("elitism_count must be smaller than the population")
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")


@dataclass
class SearchResult:
    codebook: Codebook
    fitness: float
    trace: list[float] = field(default_factory=list)
    generator: GeneratorMatrix | None = None


def _kernel_lut(n: int, sigma: float) -> np.ndarray:
    """exp(-d / (2 sigma^2)) for every possible Hamming distance d."""
    return np.exp(-np.arange(n + 1, dtype=np.float64) / (2.0 * sigma * sigma))


def default_duplicate_penalty(space: SymbolSpace, loss: LossSpec) -> float:
    table = loss.loss_table(space)
    return float(space.m**2 * table.max())


def objective_v(cb: Codebook, loss: LossSpec, sigma: float) -> float:
    """Exact pair-sum objective of a codebook."""
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    table = loss.loss_table(cb.space)
    return kernels.objective(cb.words, table, _kernel_lut(cb.n, sigma))


class _Evaluator:
    """Precomputed fitness state for candidates over one (space, n) setting."""

    def __init__(self, space: SymbolSpace, n: int, cfg: FitnessConfig):
        if space.m > (1 << n):
            raise SearchFailure(
                f"{space.m} codewords of {n} bits cannot be distinct; increase n"
            )
        self.space = space
        self.n = n
        self.loss_table = cfg.loss.loss_table(space)
        self.lut = _kernel_lut(n, cfg.sigma)
        if cfg.duplicate_penalty is None:
            self.penalty = default_duplicate_penalty(space, cfg.loss)
        else:
            self.penalty = float(cfg.duplicate_penalty)
        if not self.penalty > 0:
            raise ValueError("duplicate penalty must be positive")

    def words_of(self, chromosome: np.ndarray) -> np.ndarray:
        return chromosome.reshape(self.space.m, self.n)

    def many(self, chromosomes: np.ndarray) -> np.ndarray:
        pop = chromosomes.reshape(-1, self.space.m, self.n)
        return kernels.fitness_many(pop, self.loss_table, self.lut, self.penalty)

    def single(self, chromosome: np.ndarray) -> float:
        return float(self.many(chromosome[None, :])[0])

    @property
    def chromosome_length(self) -> int:
        return self.space.m * self.n


class _LinearEvaluator(_Evaluator):
    """Fitness over k x n generator chromosomes.

    Codeword distances of a linear code depend only on the XOR of the symbol
    indices, so per candidate only the m codeword weights are needed:
    d_H(word_i, word_j) = weight(word_{i xor j}).  Rank-deficient generators
    produce zero-weight nonzero codewords and collect duplicate penalties.
    """

    def __init__(self, space: SymbolSpace, n: int, cfg: FitnessConfig):
        super().__init__(space, n, cfg)
        m, k = space.m, space.k
        if m != 1 << k:
            raise ValueError("linear search needs the full 2**k symbol space")
        idx = np.arange(m)
        self.xor_index = idx[:, None] ^ idx[None, :]
        shifts = np.arange(k - 1, -1, -1)
        self.symbol_bits = ((idx[:, None] >> shifts[None, :]) & 1).astype(np.int64)

    def words_of(self, chromosome: np.ndarray) -> np.ndarray:
        gen = chromosome.reshape(self.space.k, self.n)
        return generator_codewords(gen, self.space.m, self.space.k)

    def many(self, chromosomes: np.ndarray) -> np.ndarray:
        m = self.space.m
        gens = chromosomes.reshape(-1, self.space.k, self.n).astype(np.int64)
        out = np.empty(gens.shape[0], dtype=np.float64)
        chunk = max(1, 4_000_000 // (m * m))
        for start in range(0, gens.shape[0], chunk):
            words = (self.symbol_bits @ gens[start : start + chunk]) % 2
            weights = words.sum(axis=2)  # (chunk, m)
            dh = weights[:, self.xor_index]  # (chunk, m, m)
            v = (self.loss_table[None, :, :] * self.lut[dh]).sum(axis=(1, 2))
            dup = ((dh == 0).sum(axis=(1, 2)) - m) // 2
            out[start : start + chunk] = v + self.penalty * dup
        return out

    @property
    def chromosome_length(self) -> int:
        return self.space.k * self.n


def fitness(candidate_words, cfg: FitnessConfig, space: SymbolSpace) -> float:
    """Fitness of a candidate (m, n) bit matrix: objective plus duplicate
    penalties; lower is better.  Candidates may contain duplicate rows."""
    words = np.ascontiguousarray(candidate_words, dtype=np.uint8)
    ev = _Evaluator(space, words.shape[1], cfg)
    return ev.single(words.reshape(-1))


def _has_duplicate_rows(words: np.ndarray) -> bool:
    return len({row.tobytes() for row in words}) < words.shape[0]


def _random_chromosome(ev: _Evaluator, rng: np.random.Generator) -> np.ndarray:
    chrom = rng.integers(0, 2, size=ev.chromosome_length, dtype=np.uint8)
    if _has_duplicate_rows(ev.words_of(chrom)):
        # one resample; the duplicate penalty handles persistent collisions
        chrom = rng.integers(0, 2, size=ev.chromosome_length, dtype=np.uint8)
    return chrom


def _mutate(chrom: np.ndarray, op: str, rng: np.random.Generator) -> None:
    if op == "swap":
        i, j = rng.choice(chrom.shape[0], size=2, replace=False)
        chrom[i], chrom[j] = chrom[j], chrom[i]
    else:
        chrom[rng.integers(chrom.shape[0])] ^= 1


def _run_ga(ev: _Evaluator, search: SearchConfig):
    rng = np.random.Generator(np.random.PCG64(search.seed))
    length = ev.chromosome_length
    pop_size = search.population_size
    pop = np.stack([_random_chromosome(ev, rng) for _ in range(pop_size)])
    fit = ev.many(pop)

    best_fit = np.inf
    best_chrom = None
    trace: list[float] = []
    for _ in range(search.generations):
        order = np.argsort(fit, kind="stable")
        leader = order[0]
        if fit[leader] < best_fit:
            best_fit = float(fit[leader])
            best_chrom = pop[leader].copy()
        trace.append(best_fit)

        elites = pop[order[: search.elitism_count]].copy()
        children = []
        while len(children) < pop_size - search.elitism_count:
            parents = []
            for _ in range(2):
                picks = rng.integers(pop_size, size=TOURNAMENT_SIZE)
                winner = min(picks, key=lambda idx: fit[idx])
                parents.append(pop[winner])
            if rng.random() < search.crossover_rate:
                cut = int(rng.integers(1, length))
                c1 = np.concatenate([parents[0][:cut], parents[1][cut:]])
                c2 = np.concatenate([parents[1][:cut], parents[0][cut:]])
            else:
                c1, c2 = parents[0].copy(), parents[1].copy()
            for child in (c1, c2):
                if rng.random() < search.mutation_rate:
                    _mutate(child, search.mutation_op, rng)
                children.append(child)
        pop = np.vstack([elites] + children[: pop_size - search.elitism_count])
        fit = ev.many(pop)

    leader = int(np.argsort(fit, kind="stable")[0])
    if fit[leader] < best_fit:
        best_fit = float(fit[leader])
        best_chrom = pop[leader].copy()
    trace.append(best_fit)
    return best_fit, best_chrom, trace


def ga_optimize(
    space: SymbolSpace, n: int, cfg: FitnessConfig, search: SearchConfig
) -> SearchResult:
    """Genetic search over full (m, n) codebooks: tournament selection,
    one-point crossover, swap mutation, elitism; returns the best-ever
    candidate and the per-generation best-fitness trace."""
    if search.algorithm != "ga":
        raise ValueError("search config selects a different algorithm")
    ev = _Evaluator(space, n, cfg)
    best_fit, best_chrom, trace = _run_ga(ev, search)
    words = ev.words_of(best_chrom)
    if _has_duplicate_rows(words):
        raise SearchFailure(
            "best candidate still has duplicate codewords; increase the "
            "generation budget or the duplicate penalty"
        )
    return SearchResult(Codebook(space, words), best_fit, trace)


def ga_optimize_linear(
    space: SymbolSpace, n: int, cfg: FitnessConfig, search: SearchConfig
) -> SearchResult:
    """Genetic search over k x n generator matrices (the linear-code
    subspace; chromosomes are k*n bits instead of 2**k * n)."""
    ev = _LinearEvaluator(space, n, cfg)
    best_fit, best_chrom, trace = _run_ga(ev, search)
    entries = best_chrom.reshape(space.k, n)
    if gf2_rank(entries) != space.k:
        raise SearchFailure(
            "best generator is rank-deficient; increase the generation "
            "budget or the duplicate penalty"
        )
    gen = GeneratorMatrix(entries)
    return SearchResult(
        Codebook(space, ev.words_of(best_chrom)), best_fit, trace, generator=gen
    )


def _climb_one(ev: _Evaluator, rng: np.random.Generator):
    """First-improvement bit-flip descent from a random duplicate-free start."""
    length = ev.chromosome_length
    while True:
        chrom = rng.integers(0, 2, size=length, dtype=np.uint8)
        if not _has_duplicate_rows(ev.words_of(chrom)):
            break
    current = ev.single(chrom)
    improved = True
    while improved:
        improved = False
        # evaluate all single-bit flips at once, then walk them in random
        # order and accept the first strict improvement
        neighbors = np.broadcast_to(chrom, (length, length)).copy()
        flips = np.arange(length)
        neighbors[flips, flips] ^= 1
        neighbor_fit = ev.many(neighbors)
        for pos in rng.permutation(length):
            if neighbor_fit[pos] < current:
                chrom = neighbors[pos]
                current = float(neighbor_fit[pos])
                improved = True
                break
    return current, chrom


def hill_climb(
    space: SymbolSpace, n: int, cfg: FitnessConfig, search: SearchConfig
) -> SearchResult:
    """Random-restart first-improvement bit-flip search; returns the best
    local optimum over `search.restarts` restarts."""
    if search.algorithm != "hill_climb":
        raise ValueError("search config selects a different algorithm")
    ev = _Evaluator(space, n, cfg)
    rng = np.random.Generator(np.random.PCG64(search.seed))
    best_fit = np.inf
    best_chrom = None
    trace: list[float] = []
    for _ in range(search.restarts):
        local_fit, chrom = _climb_one(ev, rng)
        if local_fit < best_fit:
            best_fit = local_fit
            best_chrom = chrom
        trace.append(best_fit)
    words = ev.words_of(best_chrom)
    # unreachable when the penalty dominates, but cheap to keep honest
    if _has_duplicate_rows(words):
        raise SearchFailure("hill climbing ended on a duplicate-row candidate")
    return SearchResult(Codebook(space, words), best_fit, trace)


def run_search(
    space: SymbolSpace,
    n: int,
    cfg: FitnessConfig,
    search: SearchConfig,
    linear: bool = False,
) -> tuple[SearchResult, float]:
    """Dispatch a configured search; returns the result and wall time."""
    start = time.perf_counter()
    if linear:
        result = ga_optimize_linear(space, n, cfg, search)
    elif search.algorithm == "ga":
        result = ga_optimize(space, n, cfg, search)
    else:
        result = hill_climb(space, n, cfg, search)
    return result, time.perf_counter() - start
