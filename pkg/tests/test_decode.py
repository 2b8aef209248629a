import numpy as np
import pytest

from conftest import noisy_corpus, random_codebook
from sigecc.codes import Codebook
from sigecc.decode import (
    DecodeMethod,
    bayes_decode,
    bayes_decode_fast,
    decode_batch,
    hard_decode,
    mean_decode,
    median_decode,
    posterior,
    soft_decode,
)
from sigecc.loss import LossSpec
from sigecc.symbols import SymbolSpace


def two_word_codebook():
    return Codebook(SymbolSpace.unsigned(1), [[0], [1]])


class TestPosterior:
    def test_midpoint_symmetric(self):
        probs = posterior([0.0], two_word_codebook(), sigma=0.8)
        assert probs.tolist() == [0.5, 0.5]

    def test_concentrates_at_low_sigma(self, sq_opt_cb):
        for i in (0, 5, 15):
            probs = posterior(sq_opt_cb.modulated()[i], sq_opt_cb, sigma=0.05)
            assert probs.argmax() == i
            assert probs[i] > 0.999

    def test_two_equidistant_words(self, abs_opt_cb):
        # halfway between the codewords of 7 and 8, which differ in one bit
        midpoint = (abs_opt_cb.modulated()[7] + abs_opt_cb.modulated()[8]) / 2.0
        probs = posterior(midpoint, abs_opt_cb, sigma=0.2)
        assert probs[7] == pytest.approx(0.5, abs=1e-6)
        assert probs[8] == pytest.approx(0.5, abs=1e-6)

    @pytest.mark.parametrize("sigma", [1e-3, 1.0, 1e3])
    def test_normalized_across_sigmas(self, sq_opt_cb, sigma):
        rng = np.random.default_rng(11)
        for _ in range(20):
            received = rng.normal(0.0, 2.0, size=sq_opt_cb.n)
            probs = posterior(received, sq_opt_cb, sigma)
            assert abs(probs.sum() - 1.0) <= 1e-9
            assert np.all(probs >= 0)

    def test_matches_direct_formula(self, sq_opt_cb):
        rng = np.random.default_rng(12)
        mod = sq_opt_cb.modulated()
        for _ in range(50):
            received = rng.normal(0.0, 1.5, size=sq_opt_cb.n)
            d2 = ((received[None, :] - mod) ** 2).sum(axis=1)
            weights = np.exp(-(d2 - d2.min()) / 2.0)
            expected = weights / weights.sum()
            assert np.allclose(posterior(received, sq_opt_cb, 1.0), expected, rtol=1e-12)

    def test_sigma_validation(self, sq_opt_cb):
        with pytest.raises(ValueError, match="positive"):
            posterior(np.zeros(7), sq_opt_cb, 0.0)


class TestHardDecode:
    def test_noiseless(self, sq_opt_cb):
        for i in range(sq_opt_cb.m):
            assert hard_decode(sq_opt_cb.modulated()[i], sq_opt_cb) == i

    def test_single_error_correction(self, hamming74_cb):
        # exhaustive flip scan: minimum distance 3 corrects any single flip
        for i in range(hamming74_cb.m):
            clean = hamming74_cb.modulated()[i]
            for pos in range(hamming74_cb.n):
                flipped = clean.copy()
                flipped[pos] = -flipped[pos]
                assert hard_decode(flipped, hamming74_cb) == i

    def test_tie_breaks_to_lowest_index(self):
        # quantized word 0011 is at distance 1 from rows 2 and 5, farther
        # from the rest
        space = SymbolSpace.custom(3, [0, 1, 2, 3, 4, 5])
        cb = Codebook(
            space,
            [
                [1, 1, 0, 0],
                [1, 1, 0, 1],
                [0, 0, 0, 1],
                [1, 1, 1, 0],
                [1, 1, 1, 1],
                [0, 0, 1, 0],
            ],
        )
        received = np.array([1.0, 1.0, -1.0, -1.0])  # bits 0011
        assert hard_decode(received, cb) == 2

    def test_zero_sample_quantizes_to_bit_zero(self):
        cb = two_word_codebook()
        assert hard_decode(np.array([0.0]), cb) == 0


class TestSoftDecode:
    def test_noiseless(self, sq_opt_cb):
        for i in range(sq_opt_cb.m):
            assert soft_decode(sq_opt_cb.modulated()[i], sq_opt_cb) == i

    def test_midpoint_tie_to_lowest(self):
        assert soft_decode(np.array([0.0]), two_word_codebook()) == 0

    def test_equals_posterior_argmax(self, sq_opt_cb):
        rng = np.random.default_rng(13)
        corpus = noisy_corpus(sq_opt_cb, 500, rng)
        for received in corpus:
            assert soft_decode(received, sq_opt_cb) == int(
                posterior(received, sq_opt_cb, 0.9).argmax()
            )


class TestBayesDecode:
    def test_zero_one_equals_soft(self, sq_opt_cb):
        spec = LossSpec.zero_one(sq_opt_cb.m)
        rng = np.random.default_rng(14)
        corpus = noisy_corpus(sq_opt_cb, 1000, rng)
        for received in corpus:
            assert bayes_decode(received, sq_opt_cb, spec, 1.0) == soft_decode(
                received, sq_opt_cb
            )

    def test_noiseless_any_loss(self, sq_opt_cb):
        for spec in (LossSpec.abs_diff(), LossSpec.squared_diff(), LossSpec.zero_one(16)):
            for i in (0, 7, 15):
                clean = sq_opt_cb.modulated()[i]
                assert bayes_decode(clean, sq_opt_cb, spec, 0.05) == i

    def test_sigma_validation(self, sq_opt_cb):
        with pytest.raises(ValueError, match="positive"):
            bayes_decode(np.zeros(7), sq_opt_cb, LossSpec.abs_diff(), -1.0)


class TestMeanDecode:
    def test_indicator(self):
        values = np.arange(16)
        probs = np.zeros(16)
        probs[5] = 1.0
        assert mean_decode(probs, values) == 5

    def test_uniform_ties_to_lower(self):
        # mean 7.5 is equidistant from 7 and 8; the lower index wins
        values = np.arange(16)
        assert mean_decode(np.full(16, 1 / 16), values) == 7

    def test_exact_squared_loss_minimizer(self):
        # oracle: exhaustive argmin of the expected squared loss
        rng = np.random.default_rng(15)
        values = np.arange(16.0)
        for _ in range(500):
            probs = rng.dirichlet(np.full(16, 0.3))
            expected = ((values[:, None] - values[None, :]) ** 2) @ probs
            assert mean_decode(probs, values) == int(expected.argmin())


class TestMedianDecode:
    def test_mass_split_between_two_values(self):
        # everything between 0 and 10 minimizes; the lower median convention
        # picks 0, matching the exhaustive decoder's lowest-index tie break
        values = np.arange(16)
        probs = np.zeros(16)
        probs[0] = 0.5
        probs[10] = 0.5
        assert median_decode(probs, values) == 0

    def test_is_expected_abs_loss_minimizer(self):
        rng = np.random.default_rng(16)
        values = np.arange(16.0)
        for _ in range(500):
            probs = rng.dirichlet(np.full(16, 0.3))
            expected = np.abs(values[:, None] - values[None, :]) @ probs
            got = median_decode(probs, values)
            assert expected[got] <= expected.min() + 1e-12

    def test_signed_values_sorted_by_value(self):
        space = SymbolSpace.twos_complement(3)
        values = space.values()
        probs = np.zeros(8)
        probs[space.index_of(-4)] = 0.6
        probs[space.index_of(3)] = 0.4
        assert values[median_decode(probs, values)] == -4


class TestBayesFast:
    def test_squared_matches_exhaustive(self, sq_opt_cb):
        spec = LossSpec.squared_diff()
        rng = np.random.default_rng(17)
        corpus = noisy_corpus(sq_opt_cb, 1000, rng)
        for received in corpus:
            assert bayes_decode_fast(received, sq_opt_cb, spec, 1.0) == bayes_decode(
                received, sq_opt_cb, spec, 1.0
            )

    def test_abs_disagreements_are_ties(self, twos_opt_cb):
        # the lower weighted median may differ from the lowest-index argmin
        # only when the expected losses tie
        spec = LossSpec.abs_diff()
        table = spec.loss_table(twos_opt_cb.space)
        rng = np.random.default_rng(18)
        corpus = noisy_corpus(twos_opt_cb, 1000, rng)
        disagreements = 0
        for received in corpus:
            fast = bayes_decode_fast(received, twos_opt_cb, spec, 1.0)
            exact = bayes_decode(received, twos_opt_cb, spec, 1.0)
            if fast != exact:
                disagreements += 1
                probs = posterior(received, twos_opt_cb, 1.0)
                expected = table @ probs
                assert expected[fast] == pytest.approx(expected[exact], abs=1e-12)
        assert disagreements <= len(corpus) // 100

    def test_unsupported_kind(self, sq_opt_cb):
        with pytest.raises(ValueError, match="no fast path"):
            bayes_decode_fast(np.zeros(7), sq_opt_cb, LossSpec.zero_one(16), 1.0)


class TestDecodeBatch:
    def test_matches_single_calls(self, sq_opt_cb):
        rng = np.random.default_rng(19)
        corpus = noisy_corpus(sq_opt_cb, 200, rng)
        spec = LossSpec.squared_diff()
        hard = decode_batch(corpus, sq_opt_cb, DecodeMethod("hard"))
        soft = decode_batch(corpus, sq_opt_cb, DecodeMethod("soft"))
        bayes = decode_batch(corpus, sq_opt_cb, DecodeMethod("bayes", spec), sigma=1.0)
        for row, received in enumerate(corpus):
            assert hard[row] == hard_decode(received, sq_opt_cb)
            assert soft[row] == soft_decode(received, sq_opt_cb)
            assert bayes[row] == bayes_decode(received, sq_opt_cb, spec, 1.0)

    def test_shape_validation(self, sq_opt_cb):
        with pytest.raises(ValueError, match="batch"):
            decode_batch(np.zeros((4, 5)), sq_opt_cb, DecodeMethod("hard"))

    def test_bayes_needs_sigma(self, sq_opt_cb):
        method = DecodeMethod("bayes", LossSpec.abs_diff())
        with pytest.raises(ValueError, match="sigma"):
            decode_batch(np.zeros((2, 7)), sq_opt_cb, method)

    def test_method_validation(self):
        with pytest.raises(ValueError, match="unknown decoder"):
            DecodeMethod("turbo")
        with pytest.raises(ValueError, match="needs a loss"):
            DecodeMethod("bayes")


def test_fuzz_decoder_agreement(hamming74_cb):
    # random codebook and the Hamming baseline: mode-loss Bayes equals soft,
    # fast squared equals exhaustive squared
    rng = np.random.default_rng(20)
    small = random_codebook(SymbolSpace.unsigned(3), 5, rng)
    for cb in (hamming74_cb, small):
        zero_one = LossSpec.zero_one(cb.m)
        squared = LossSpec.squared_diff()
        corpus = noisy_corpus(cb, 400, rng)
        for received in corpus:
            assert bayes_decode(received, cb, zero_one, 0.7) == soft_decode(received, cb)
            assert bayes_decode_fast(received, cb, squared, 0.7) == bayes_decode(
                received, cb, squared, 0.7
            )
