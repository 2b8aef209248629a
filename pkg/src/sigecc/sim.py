"""Monte Carlo estimation of the symbol-space error rate versus SNR.

Each (config, SNR) cell draws uniform symbols, encodes, BPSK-modulates,
adds Gaussian noise, decodes, and averages the metric loss between decoded
and transmitted symbols.  Cells are independently seeded from
(config seed, SNR index), so results do not depend on execution order or
worker count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channel import estimate_noise_variance, snr_db_to_sigma
from .codes import Codebook
from .decode import DecodeMethod, decode_batch
from .loss import LossSpec

DEFAULT_SNR_GRID_DB = [float(db) for db in range(-4, 9)]

# decode in slices so the (chunk, m) posterior tensors stay small
_DECODE_CHUNK = 1 << 17


@dataclass
class SimulationConfig:
    codebook: Codebook
    decoder: DecodeMethod
    metric: LossSpec
    snr_db: list[float] = field(default_factory=lambda: list(DEFAULT_SNR_GRID_DB))
    num_symbols: int = 100_000
    seed: int = 0
    sigma_source: str = "true"  # "true" | "estimated"
    num_probe_words: int = 10_000
    codebook_id: str = "codebook"

    def __post_init__(self):
        if self.num_symbols < 1:
            raise ValueError("num_symbols must be at least 1")
        if not self.snr_db:
            raise ValueError("need at least one SNR point")
        if self.sigma_source not in ("true", "estimated"):
            raise ValueError(f"unknown sigma_source {self.sigma_source!r}")
        if self.sigma_source == "estimated" and self.num_probe_words < 1:
            raise ValueError("estimated sigma needs at least one probe word")
        # fail fast on metric/space shape mismatches
        self.metric.loss_table(self.codebook.space)
        if self.decoder.kind == "bayes":
            self.decoder.loss.loss_table(self.codebook.space)


@dataclass
class SnrPoint:
    snr_db: float
    e_delta: float
    stderr: float
    n_symbols: int
    sigma_used: float


@dataclass
class SimulationResult:
    config: SimulationConfig
    points: list[SnrPoint]


def _cell_rngs(seed: int, snr_index: int):
    """Independent data/probe streams per cell; the data stream is identical
    whether or not probes are drawn."""
    data_ss, probe_ss = np.random.SeedSequence((seed, snr_index)).spawn(2)
    return np.random.Generator(np.random.PCG64(data_ss)), np.random.Generator(
        np.random.PCG64(probe_ss)
    )


def run_cell(cfg: SimulationConfig, snr_db: float, snr_index: int) -> SnrPoint:
    """One (config, SNR) Monte Carlo cell."""
    cb = cfg.codebook
    sigma_channel = snr_db_to_sigma(snr_db)
    data_rng, probe_rng = _cell_rngs(cfg.seed, snr_index)

    sigma_decoder = sigma_channel
    if cfg.decoder.kind == "bayes" and cfg.sigma_source == "estimated":
        probe_syms = probe_rng.integers(cb.m, size=cfg.num_probe_words)
        probe_rx = cb.modulated()[probe_syms] + probe_rng.normal(
            0.0, sigma_channel, size=(cfg.num_probe_words, cb.n)
        )
        sigma_decoder = float(np.sqrt(estimate_noise_variance(probe_rx, cb)))

    metric_table = cfg.metric.loss_table(cb.space)
    total = 0.0
    total_sq = 0.0
    n = cfg.num_symbols
    for start in range(0, n, _DECODE_CHUNK):
        count = min(_DECODE_CHUNK, n - start)
        syms = data_rng.integers(cb.m, size=count)
        received = cb.modulated()[syms] + data_rng.normal(
            0.0, sigma_channel, size=(count, cb.n)
        )
        decoded = decode_batch(received, cb, cfg.decoder, sigma=sigma_decoder)
        losses = metric_table[decoded, syms]
        total += float(losses.sum())
        total_sq += float((losses**2).sum())

    mean = total / n
    var = max(0.0, (total_sq - n * mean * mean) / (n - 1)) if n > 1 else 0.0
    stderr = float(np.sqrt(var / n))
    return SnrPoint(float(snr_db), mean, stderr, n, sigma_decoder)


def run(cfg: SimulationConfig) -> SimulationResult:
    """Run one config across its SNR grid."""
    points = [run_cell(cfg, snr, idx) for idx, snr in enumerate(cfg.snr_db)]
    return SimulationResult(cfg, points)


def _run_indexed_cell(args):
    cfg, cfg_index, snr_db, snr_index = args
    return cfg_index, run_cell(cfg, snr_db, snr_index)


def sweep(cfgs: list[SimulationConfig], jobs: int = 1) -> list[dict]:
    """Run several configs and return long-format rows sorted by
    (codebook_id, decoder, snr_db)."""
    tasks = [
        (cfg, cfg_index, snr, snr_index)
        for cfg_index, cfg in enumerate(cfgs)
        for snr_index, snr in enumerate(cfg.snr_db)
    ]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_indexed_cell, tasks, chunksize=1))
    else:
        results = [_run_indexed_cell(task) for task in tasks]

    rows = []
    for cfg_index, point in results:
        cfg = cfgs[cfg_index]
        rows.append(
            {
                "codebook_id": cfg.codebook_id,
                "decoder": cfg.decoder.kind,
                "snr_db": point.snr_db,
                "e_delta": point.e_delta,
                "stderr": point.stderr,
                "n_symbols": point.n_symbols,
                "sigma_used": point.sigma_used,
            }
        )
    rows.sort(key=lambda r: (r["codebook_id"], r["decoder"], r["snr_db"]))
    return rows


CSV_COLUMNS = ("codebook_id", "decoder", "snr_db", "e_delta", "stderr", "n_symbols", "sigma_used")


def rows_to_csv(rows: list[dict]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        lines.append(
            ",".join(
                str(row[col]) if col in ("codebook_id", "decoder", "n_symbols")
                else repr(float(row[col]))
                for col in CSV_COLUMNS
            )
        )
    return "\n".join(lines) + "\n"


def write_csv(rows: list[dict], path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(rows_to_csv(rows))
