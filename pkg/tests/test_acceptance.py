"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Monte Carlo criteria run at 10^5 symbols with fixed seeds; slack terms are
expressed in combined standard errors of the compared estimates.
"""

import itertools
import math

import numpy as np
import pytest

from conftest import noisy_corpus, random_codebook
from sigecc import codes
from sigecc.decode import DecodeMethod, bayes_decode, decode_batch
from sigecc.loss import LossSpec
from sigecc.optimize import FitnessConfig, SearchConfig, ga_optimize, ga_optimize_linear, hill_climb, objective_v
from sigecc.sim import SimulationConfig, run_cell
from sigecc.symbols import SymbolSpace

SEED = 814
N_SYMBOLS = 100_000
SQ = LossSpec.squared_diff()
ABS = LossSpec.abs_diff()


def _report(num: int, name: str, ok: bool, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    print(f"\nACCEPTANCE {num:02d} {name}: {status}" + (f" ({detail})" if detail else ""))
    assert ok, f"criterion {num} ({name}) failed: {detail}"


def _slack(*points, factor=2.0):
    return factor * math.hypot(*(p.stderr for p in points))


def _sim_point(cb, decoder_kind, *, seed=SEED, sigma_source="true", probes=10_000,
               num_symbols=N_SYMBOLS, snr_db=0.0):
    decoder = DecodeMethod(decoder_kind, SQ) if decoder_kind == "bayes" else DecodeMethod(decoder_kind)
    cfg = SimulationConfig(
        codebook=cb,
        decoder=decoder,
        metric=SQ,
        snr_db=[snr_db],
        num_symbols=num_symbols,
        seed=seed,
        sigma_source=sigma_source,
        num_probe_words=probes,
    )
    return run_cell(cfg, snr_db, 0)


@pytest.fixture(scope="module")
def zero_db_points(sq_opt_cb, hamming74_cb):
    """e_delta2 at 0 dB for both codebooks under all three decoders."""
    points = {}
    for cb_name, cb in (("opt", sq_opt_cb), ("ham", hamming74_cb)):
        for decoder in ("hard", "soft", "bayes"):
            points[cb_name, decoder] = _sim_point(cb, decoder)
    return points


@pytest.fixture(scope="module")
def fuzz_corpus(sq_opt_cb):
    """10^4 received vectors over k <= 4 codebooks, with per-codebook slices."""
    rng = np.random.default_rng(SEED)
    cb3 = random_codebook(SymbolSpace.unsigned(3), 5, rng)
    cb2 = random_codebook(SymbolSpace.twos_complement(2), 4, rng)
    return [
        (sq_opt_cb, noisy_corpus(sq_opt_cb, 4000, rng)),
        (cb3, noisy_corpus(cb3, 3000, rng)),
        (cb2, noisy_corpus(cb2, 3000, rng)),
    ]


def test_c01_fixture_fidelity(abs_opt_cb, sq_opt_cb, twos_opt_cb, tmp_path):
    cbs = {"opt47_abs": abs_opt_cb, "opt47_sq": sq_opt_cb, "opt47_sq_twos": twos_opt_cb}
    round_trips = True
    for name, cb in cbs.items():
        path = tmp_path / f"{name}.txt"
        codes.save_codebook(cb, path)
        round_trips &= codes.load_codebook(path) == cb
    for name in ("lin47_sq", "lin128_sq"):
        gen, space = codes.reference_generator(name)
        path = tmp_path / f"{name}.txt"
        codes.save_generator(gen, space, path)
        loaded_gen, loaded_space = codes.load_generator(path)
        round_trips &= loaded_gen == gen and loaded_space == space

    d_78 = codes.hamming_distance(abs_opt_cb.encode(7), abs_opt_cb.encode(8))
    d_08 = codes.hamming_distance(abs_opt_cb.encode(0), abs_opt_cb.encode(8))
    ok = round_trips and d_78 == 1 and d_08 == 5
    _report(1, "fixture-fidelity", ok, f"d(7,8)={d_78}, d(0,8)={d_08}, round_trips={round_trips}")


def test_c02_decoder_ordering(zero_db_points):
    pts = zero_db_points
    checks = []
    # Bayes <= soft <= hard on the optimized codebook, 2-SE slack
    for better, worse in (("bayes", "soft"), ("soft", "hard")):
        a, b = pts["opt", better], pts["opt", worse]
        checks.append((f"opt:{better}<={worse}", a.e_delta <= b.e_delta + _slack(a, b)))
    # optimized codebook beats the Hamming baseline under every decoder
    for decoder in ("hard", "soft", "bayes"):
        a, b = pts["opt", decoder], pts["ham", decoder]
        checks.append((f"{decoder}:opt<=ham", a.e_delta <= b.e_delta + _slack(a, b)))
    detail = "; ".join(
        f"{name} {'ok' if ok else 'VIOLATED'}" for name, ok in checks
    ) + "; " + "; ".join(
        f"{cb}/{dec}={pts[cb, dec].e_delta:.4f}" for cb in ("opt", "ham") for dec in ("hard", "soft", "bayes")
    )
    _report(2, "decoder-ordering", all(ok for _, ok in checks), detail)


def test_c03_error_ratio_bound(zero_db_points):
    ratio = zero_db_points["opt", "bayes"].e_delta / zero_db_points["ham", "hard"].e_delta
    _report(3, "optimized-bayes-vs-baseline-hard-ratio", ratio <= 0.80, f"ratio={ratio:.4f} <= 0.80")


def _oracle_bayes_indices(cb, received, loss, sigma):
    """Independent brute-force expected-loss minimizer (full distances,
    explicit softmax, python-built loss table)."""
    vals = [int(v) for v in cb.space.values()]
    if loss.kind == "sq":
        table = np.array([[(a - b) ** 2 for b in vals] for a in vals], dtype=float)
    else:
        table = np.array([[abs(a - b) for b in vals] for a in vals], dtype=float)
    mod = 1.0 - 2.0 * cb.words.astype(float)
    d2 = ((received[:, None, :] - mod[None, :, :]) ** 2).sum(axis=2)
    logits = -d2 / (2.0 * sigma * sigma)
    logits -= logits.max(axis=1, keepdims=True)
    probs = np.exp(logits)
    probs /= probs.sum(axis=1, keepdims=True)
    expected = np.einsum("ni,ji->nj", probs, table)
    return expected.argmin(axis=1)


def test_c04_bayes_oracle_equivalence(fuzz_corpus):
    sigma = 0.9
    total = 0
    mismatches = 0
    fast_mismatches = 0
    rng = np.random.default_rng(SEED + 1)
    for cb, received in fuzz_corpus:
        expected = _oracle_bayes_indices(cb, received, SQ, sigma)
        got = decode_batch(received, cb, DecodeMethod("bayes", SQ), sigma=sigma)
        mismatches += int((expected != got).sum())
        total += received.shape[0]
        # the scalar fast path must match the exhaustive decoder exactly
        mean_table = SQ.loss_table(cb.space)
        values = cb.space.values().astype(float)
        probs = np.exp(
            -(((received[:, None, :] - (1.0 - 2.0 * cb.words.astype(float))[None]) ** 2).sum(2))
            / (2 * sigma**2)
        )
        probs /= probs.sum(axis=1, keepdims=True)
        means = probs @ values
        fast = np.abs(values[None, :] - means[:, None]).argmin(axis=1)
        fast_mismatches += int((fast != got).sum())
        # spot-check the single-vector entry point against the oracle
        for idx in rng.choice(received.shape[0], size=50, replace=False):
            assert bayes_decode(received[idx], cb, SQ, sigma) == expected[idx]
    ok = mismatches == 0 and fast_mismatches == 0
    _report(4, "bayes-oracle-equivalence",
            ok, f"{total} vectors, argmin mismatches={mismatches}, fast-path mismatches={fast_mismatches}")


def test_c05_zero_one_loss_equals_soft(fuzz_corpus):
    sigma = 0.9
    mismatches = 0
    total = 0
    for cb, received in fuzz_corpus:
        zero_one = LossSpec.zero_one(cb.m)
        soft = decode_batch(received, cb, DecodeMethod("soft"))
        mode = decode_batch(received, cb, DecodeMethod("bayes", zero_one), sigma=sigma)
        mismatches += int((soft != mode).sum())
        total += received.shape[0]
    _report(5, "mode-loss-equals-soft", mismatches == 0, f"{total} vectors, mismatches={mismatches}")


def _enumerate_small_fitness_minimum():
    """Brute force over all 2^12 candidate 4x3 codebooks (abs loss, sigma=1)."""
    space = SymbolSpace.unsigned(2)
    vals = [int(v) for v in space.values()]
    table = [[abs(a - b) for b in vals] for a in vals]
    penalty = 16 * 3  # m^2 * max entry
    best = math.inf
    for bits in itertools.product((0, 1), repeat=12):
        words = [bits[0:3], bits[3:6], bits[6:9], bits[9:12]]
        v = 0.0
        dup = 0
        for i in range(4):
            for j in range(4):
                if i == j:
                    continue
                d = sum(a != b for a, b in zip(words[i], words[j]))
                v += table[i][j] * math.exp(-d / 2.0)
                if d == 0 and i < j:
                    dup += 1
        best = min(best, v + penalty * dup)
    return best


def test_c06_small_instance_optimality():
    optimum = _enumerate_small_fitness_minimum()
    space = SymbolSpace.unsigned(2)
    cfg = FitnessConfig(ABS, 1.0)
    ga = ga_optimize(space, 3, cfg, SearchConfig(algorithm="ga", seed=SEED))
    hc = hill_climb(space, 3, cfg, SearchConfig(algorithm="hill_climb", seed=SEED))
    ga_ok = ga.fitness <= optimum + 1e-9
    hc_ok = hc.fitness <= optimum + 1e-9
    _report(6, "small-instance-optimality", ga_ok and hc_ok,
            f"oracle={optimum:.9f}, ga={ga.fitness:.9f}, hill_climb={hc.fitness:.9f}")


def test_c07_objective_superiority(abs_opt_cb, hamming74_cb):
    v_opt = objective_v(abs_opt_cb, ABS, 1.0)
    v_ham = objective_v(hamming74_cb, ABS, 1.0)
    _report(7, "objective-superiority", v_opt < v_ham, f"v_opt={v_opt:.6f} < v_ham={v_ham:.6f}")


def test_c08_linear_search_sanity(zero_db_points):
    space = SymbolSpace.unsigned(4)
    cfg = FitnessConfig(SQ, 1.0)
    search = SearchConfig(algorithm="ga", population_size=200, generations=300, seed=SEED)
    linear = ga_optimize_linear(space, 7, cfg, search)
    lin_point = _sim_point(linear.codebook, "bayes")
    ham = zero_db_points["ham", "bayes"]
    opt = zero_db_points["opt", "bayes"]
    beats_baseline = lin_point.e_delta <= ham.e_delta + _slack(lin_point, ham)
    general_at_least_as_good = opt.e_delta <= lin_point.e_delta + _slack(opt, lin_point)
    _report(8, "linear-search-sanity", beats_baseline and general_at_least_as_good,
            f"e(linear)={lin_point.e_delta:.4f}, e(ham)={ham.e_delta:.4f}, e(general)={opt.e_delta:.4f}")


def test_c09_blind_variance_estimation(sq_opt_cb, zero_db_points):
    est_point = _sim_point(sq_opt_cb, "bayes", sigma_source="estimated", probes=10_000)
    true_point = zero_db_points["opt", "bayes"]
    sigma_sq = est_point.sigma_used**2
    within_ten_percent = abs(sigma_sq - 1.0) <= 0.10
    slack = _slack(est_point, true_point, factor=3.0)
    decode_matches = abs(est_point.e_delta - true_point.e_delta) <= slack
    _report(9, "blind-variance-estimation", within_ten_percent and decode_matches,
            f"sigma^2={sigma_sq:.4f}, e(est)={est_point.e_delta:.4f}, e(true)={true_point.e_delta:.4f}, slack={slack:.4f}")


def test_c10_permutation_invariance(abs_opt_cb):
    base = objective_v(abs_opt_cb, ABS, 1.0)
    rng = np.random.default_rng(SEED + 2)
    max_col_dev = 0.0
    for _ in range(100):
        perm = rng.permutation(abs_opt_cb.n)
        permuted = codes.Codebook(abs_opt_cb.space, abs_opt_cb.words[:, perm])
        max_col_dev = max(max_col_dev, abs(objective_v(permuted, ABS, 1.0) - base))
    cols_ok = max_col_dev <= 1e-12

    row_dev = 0.0
    for _ in range(100):
        perm = rng.permutation(abs_opt_cb.m)
        permuted = codes.Codebook(abs_opt_cb.space, abs_opt_cb.words[perm, :])
        row_dev = max(row_dev, abs(objective_v(permuted, ABS, 1.0) - base))
        if row_dev > 1e-6:
            break
    rows_ok = row_dev > 1e-6
    _report(10, "permutation-invariance", cols_ok and rows_ok,
            f"max column deviation={max_col_dev:.2e}, found row deviation={row_dev:.4f}")
