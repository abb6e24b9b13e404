"""Quantizer, bit-flip statistics, modulation, and blocklength solver checks."""

import math

import numpy as np
import pytest
import scipy.stats

from semcom.errors import ConfigError, DomainError, EncodingError, LinkBudgetError
from semcom.feature_channel import (
    LinkConfig,
    NoiseVariance,
    QuantizedVector,
    bit_flip_channel,
    bpsk_bep,
    channel_noise,
    default_modulation_policy,
    dequantize,
    error_variance,
    error_variance_single_flip,
    flip_bits,
    projected_error_stats,
    qam_bep,
    quantize,
    select_modulation,
    transmit_batch,
    transmit_feature,
    urllc_blocklength,
    urllc_latency,
)
from semcom.numerics import q_function, q_inverse
from semcom.seeding import substream


class TestQuantizer:
    def test_round_trip_error_is_bounded(self):
        rng = substream(2, 0)
        x = rng.normal(size=500)
        q = quantize(x, 12, scale=100.0)
        back = dequantize(q)
        assert np.max(np.abs(back - x)) <= 0.5 / 100.0 + 1e-12

    def test_clipping_at_both_range_ends(self):
        q = quantize(np.array([1e6, -1e6]), 8, scale=16.0)
        assert q.words[0] == 127
        assert q.words[1] == -128

    def test_rejects_non_finite(self):
        with pytest.raises(EncodingError):
            quantize(np.array([np.nan]), 8, 1.0)
        with pytest.raises(DomainError):
            quantize(np.array([1.0]), 8, -1.0)

    def test_vector_validation(self):
        with pytest.raises(DomainError):
            QuantizedVector(np.array([300]), 8, 1.0)
        with pytest.raises(DomainError):
            QuantizedVector(np.array([0]), 1, 1.0)


class TestBitFlips:
    def test_zero_probability_is_identity(self):
        q = quantize(np.linspace(-1, 1, 64), 10, 300.0)
        out = bit_flip_channel(q, 0.0, substream(3, 0))
        assert np.array_equal(out.words, q.words)

    def test_flip_bits_sign_example(self):
        q = QuantizedVector(np.array([0, 1, -1]), 8, 1.0)
        flipped = flip_bits(q, 1 << 7)
        assert flipped.words.tolist() == [-128, -127, 127]
        with pytest.raises(DomainError):
            flip_bits(q, 256)

    def test_probability_range_enforced(self):
        q = quantize(np.zeros(4), 8, 1.0)
        with pytest.raises(DomainError):
            bit_flip_channel(q, 0.7, substream(1, 0))


class TestErrorVariance:
    def test_pinned_value(self):
        # n=8, p=0.01: (4^8-1)/3 * 0.01
        assert error_variance(8, 0.01) == pytest.approx(218.45)

    def test_single_flip_form(self):
        n, p = 8, 0.01
        expected = (4**n - 1) / (3 * n) * (1 - (1 - p) ** n)
        assert error_variance_single_flip(n, p) == pytest.approx(expected, rel=1e-14)

    def test_single_flip_approaches_full_form_for_small_p(self):
        # both laws agree to first order in p
        n, p = 12, 1e-7
        full = error_variance(n, p)
        single = error_variance_single_flip(n, p)
        assert single == pytest.approx(full, rel=1e-5)

    def test_empirical_variance_for_uniform_words(self):
        # the all-flips form is exact for words uniform over the signed range
        n, p = 8, 0.05
        rng = substream(11, 0)
        words = rng.integers(-128, 128, size=400_000, dtype=np.int64)
        received = bit_flip_channel(QuantizedVector(words, n, 1.0), p, rng)
        delta = (received.words - words).astype(np.float64)
        assert delta.var() == pytest.approx(error_variance(n, p), rel=0.02)
        assert abs(delta.mean()) < 4.0 * math.sqrt(error_variance(n, p) / delta.size)

    def test_channel_noise_units(self):
        quant = channel_noise(8, 0.01)
        assert quant.units == "quantized"
        assert quant.value == pytest.approx(218.45, rel=1e-14)
        feat = channel_noise(8, 0.01, scale=10.0)
        assert feat.units == "feature"
        assert feat.value == pytest.approx(2.1845, rel=1e-14)


def test_projected_error_stats_small_run():
    w = substream(5, 0).normal(size=20)
    w /= np.linalg.norm(w)
    mean, variance, ks = projected_error_stats(20, 8, 0.05, w, substream(5, 1), samples=20_000)
    sigma_sq = error_variance(8, 0.05)
    assert abs(mean) < 4.0 * math.sqrt(sigma_sq / 20_000)
    assert variance == pytest.approx(sigma_sq, rel=0.1)
    assert ks < 0.05
    with pytest.raises(DomainError):
        projected_error_stats(3, 8, 0.05, w, substream(5, 2))


class TestModulation:
    def test_bpsk_matches_oracle(self):
        for snr in (0.1, 1.0, 4.0, 10.0):
            assert bpsk_bep(snr) == pytest.approx(scipy.stats.norm.sf(math.sqrt(2 * snr)))

    def test_bpsk_inverts_q(self):
        # the SNR where BPSK hits a target BEP comes back through q_inverse
        target = 0.35
        snr = q_inverse(target) ** 2 / 2.0
        assert bpsk_bep(snr) == pytest.approx(target, rel=1e-12)

    def test_qam4_is_exact(self):
        for snr in (0.5, 2.0, 8.0):
            assert qam_bep(snr, 4) == pytest.approx(q_function(math.sqrt(snr)), rel=1e-12)

    def test_qam_low_snr_limit_and_validation(self):
        # M=4 is the only order whose nearest-neighbour prefactor reaches 1,
        # so only there does the 1/2 cap actually bind
        assert qam_bep(1e-12, 4) == pytest.approx(0.5, rel=1e-6)
        limit = (4.0 / 6.0) * (1.0 - 1.0 / 8.0) * 0.5
        assert qam_bep(1e-12, 64) == pytest.approx(limit, rel=1e-6)
        assert qam_bep(1e-12, 64) <= 0.5
        for bad in (8, 3, 0, 32):
            with pytest.raises(DomainError):
                qam_bep(1.0, bad)

    def test_select_modulation_default_policy(self):
        # 10 dB clears the 9 dB threshold for 64-QAM but not the 14 dB one
        order, bits, p_b = select_modulation(10.0)
        assert (order, bits) == (64, 6)
        assert p_b == pytest.approx(qam_bep(10.0, 64), rel=1e-14)
        assert p_b == pytest.approx(0.142961, abs=1e-6)
        # below the lowest threshold the link falls back to BPSK
        order, bits, p_b = select_modulation(0.5)
        assert (order, bits) == (2, 1)
        assert p_b == pytest.approx(bpsk_bep(0.5))

    def test_policy_validation(self):
        with pytest.raises(ConfigError):
            select_modulation(1.0, policy=())
        with pytest.raises(ConfigError):
            select_modulation(1.0, policy=((2.0, 4), (1.0, 16)))
        with pytest.raises(ConfigError):
            select_modulation(1.0, policy=((1.0, 8),))

    def test_default_policy_is_increasing(self):
        rows = default_modulation_policy()
        thresholds = [row[0] for row in rows]
        assert thresholds == sorted(thresholds)
        assert all(order in (2, 4, 16, 64, 256, 1024) for _, order in rows)


class TestBlocklength:
    def test_pinned_solution(self):
        assert urllc_blocklength(1.0, 1e-9, 800) == 1037

    def test_solution_is_minimal_and_residual_small(self):
        snr, eps, k = 1.0, 1e-9, 800
        n = urllc_blocklength(snr, eps, k)
        cap = math.log2(1.0 + snr)
        disp = (snr * (snr + 2) / (1 + snr) ** 2) * math.log2(math.e) ** 2
        pen = q_inverse(eps)

        def margin(m):
            return m * cap - math.sqrt(m * disp) * pen + 0.5 * math.log2(m) - k

        assert 0.0 <= margin(n) < 1.0
        assert margin(n - 1) < 0.0

    def test_saturation_raises(self):
        with pytest.raises(LinkBudgetError):
            urllc_blocklength(1e-6, 1e-9, 1_000_000)

    def test_latency_is_blocklength_over_bandwidth(self):
        n = urllc_blocklength(1.0, 1e-9, 800)
        assert urllc_latency(1.0, 1e-9, 800, 1e6) == pytest.approx(n / 1e6)

    def test_argument_validation(self):
        with pytest.raises(DomainError):
            urllc_blocklength(-1.0, 1e-9, 100)
        with pytest.raises(DomainError):
            urllc_blocklength(1.0, 0.0, 100)
        with pytest.raises(DomainError):
            urllc_blocklength(1.0, 1e-9, 0)


class TestLinkConfig:
    def test_fixed_binary_needs_exactly_one_rate_parameter(self):
        LinkConfig(scheme="fixed_binary", bep=0.1)
        LinkConfig(scheme="fixed_binary", snr_linear=2.0)
        with pytest.raises(ConfigError):
            LinkConfig(scheme="fixed_binary")
        with pytest.raises(ConfigError):
            LinkConfig(scheme="fixed_binary", bep=0.1, snr_linear=2.0)

    def test_other_schemes_validate(self):
        with pytest.raises(ConfigError):
            LinkConfig(scheme="adaptive")
        with pytest.raises(ConfigError):
            LinkConfig(scheme="adaptive", snr_linear=1.0, bep=0.1)
        with pytest.raises(ConfigError):
            LinkConfig(scheme="reliable_coded", snr_linear=1.0, packet_error_target=2.0)
        with pytest.raises(ConfigError):
            LinkConfig(scheme="carrier_pigeon", bep=0.1)


class TestTransmit:
    def test_reliable_coded_delivers_exact_copy_with_block_latency(self):
        x = substream(7, 0).normal(size=50)
        link = LinkConfig(
            scheme="reliable_coded", snr_linear=1.0, bandwidth_hz=1e6,
            packet_error_target=1e-9, bits_per_feature=16,
        )
        result = transmit_feature(x, link, rng=None)
        assert np.array_equal(result.received, x)
        n = urllc_blocklength(1.0, 1e-9, 16 * 50)
        assert result.latency_s == pytest.approx(n / 1e6)
        assert result.bits_sent == n
        assert result.bep_used == 0.0

    def test_uncoded_latency_counts_payload_symbols(self):
        x = substream(7, 1).normal(size=10)
        link = LinkConfig(scheme="fixed_binary", bep=0.0, bandwidth_hz=1e3)
        result = transmit_feature(x, link, n_bits=12, scale=100.0,
                                  rng=substream(7, 2), transmissions=3)
        assert result.latency_s == pytest.approx(12 * 10 * 3 / 1e3)
        assert result.bits_sent == 12 * 10 * 3
        assert result.transmissions == 3
        # bep 0 means the only distortion is quantization rounding
        assert np.max(np.abs(result.received - x)) <= 0.5 / 100.0 + 1e-12

    def test_adaptive_uses_symbol_rate(self):
        x = np.zeros(24)
        link = LinkConfig(scheme="adaptive", snr_linear=10.0, bandwidth_hz=1e3)
        result = transmit_feature(x, link, n_bits=12, scale=10.0, rng=substream(7, 3))
        # 64-QAM at 10 dB carries 6 bits per symbol
        assert result.latency_s == pytest.approx(12 * 24 / (1e3 * 6))
        assert result.bep_used == pytest.approx(qam_bep(10.0, 64), rel=1e-14)

    def test_averaging_transmissions_shrinks_error_variance(self):
        rng = substream(13, 0)
        x = np.zeros(4000)
        link = LinkConfig(scheme="fixed_binary", bep=0.1)
        one = transmit_feature(x, link, n_bits=8, scale=1.0, rng=rng, transmissions=1)
        many = transmit_feature(x, link, n_bits=8, scale=1.0, rng=rng, transmissions=16)
        ratio = one.received.var() / many.received.var()
        assert ratio == pytest.approx(16.0, rel=0.25)

    def test_batch_matches_quantize_then_average_shape(self):
        x = substream(17, 0).normal(size=(32, 6))
        link = LinkConfig(scheme="fixed_binary", bep=0.2)
        out = transmit_batch(x, link, n_bits=10, scale=50.0, rng=substream(17, 1))
        assert out.shape == (32, 6)
        with pytest.raises(DomainError):
            transmit_batch(x, link, n_bits=10, scale=50.0, rng=None)
