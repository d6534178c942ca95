import math
from types import SimpleNamespace

import numpy as np
import pytest

from frisec.channel import (TRIALS_PER_BLOCK, ChannelStream, LinkBudget,
                            channel_gain, correlated_images_batch,
                            draw_channels, equivalent_channel, path_loss,
                            received_snr)
from frisec.control import FrisConfiguration
from frisec.errors import DomainError
from frisec.surface import SelectionSet, SurfaceGeometry, build_correlation


def small_corr(side=4, aperture=2.0):
    g = SurfaceGeometry(side, side, aperture, aperture, 0.125)
    return build_correlation(g)


class TestDraws:
    def test_deterministic(self):
        corr = small_corr()
        st = ChannelStream(seed=42, stream=3)
        r1 = draw_channels(st, 17, corr.sqrt)
        r2 = draw_channels(st, 17, corr.sqrt)
        assert np.array_equal(r1.h_feed, r2.h_feed)
        assert np.array_equal(r1.u_bob, r2.u_bob)
        assert np.array_equal(r1.u_eve, r2.u_eve)

    def test_different_trials_differ(self):
        corr = small_corr()
        st = ChannelStream(seed=42, stream=3)
        r1 = draw_channels(st, 0, corr.sqrt)
        r2 = draw_channels(st, 1, corr.sqrt)
        assert not np.array_equal(r1.h_feed, r2.h_feed)

    def test_identity_passthrough(self):
        corr = build_correlation(SurfaceGeometry(1, 1, 0.5, 0.5, 0.1))
        r = draw_channels(ChannelStream(1, 0), 5, corr.sqrt)
        assert r.u_bob[0] == r.h_bob[0]
        assert r.v_feed[0] == r.h_feed[0]

    def test_unit_power(self):
        # law-of-large-numbers check on the per-entry variance
        st = ChannelStream(seed=9, stream=0)
        n_blocks = 100_000 // TRIALS_PER_BLOCK + 1
        acc, count = 0.0, 0
        for b in range(n_blocks):
            blk = st.draw_block(4, b)
            acc += float(np.sum(np.abs(blk) ** 2))
            count += blk.size
        assert acc / count == pytest.approx(1.0, abs=0.02)

    def test_batch_matches_single_trial(self):
        corr = small_corr()
        st = ChannelStream(seed=5, stream=2)
        blk = st.draw_block(corr.n_elements, 0)
        images = correlated_images_batch(blk, corr.sqrt)
        one = draw_channels(st, 7, corr.sqrt)
        assert np.array_equal(images[7, 0], one.v_feed)
        assert np.array_equal(images[7, 1], one.u_bob)
        assert np.array_equal(images[7, 2], one.u_eve)

    def test_covariance_matches_correlation(self):
        corr = small_corr(side=3, aperture=1.0)  # M = 9, strongly correlated
        m = corr.n_elements
        st = ChannelStream(seed=11, stream=0)
        n_blocks = 100_000 // TRIALS_PER_BLOCK + 1
        acc = np.zeros((m, m), dtype=complex)
        n = 0
        for b in range(n_blocks):
            u = correlated_images_batch(st.draw_block(m, b), corr.sqrt)[:, 1]
            acc += u.T @ u.conj()
            n += u.shape[0]
        emp = (acc / n).real
        assert np.max(np.abs(emp - corr.matrix)) <= 0.02

    def test_dimension_mismatch(self):
        corr = small_corr()
        with pytest.raises(DomainError):
            draw_channels(ChannelStream(1, 0), 0, corr.sqrt[:3])


class TestPathLoss:
    def test_reference(self):
        assert path_loss(1.0, 2.5, 1.0) == 1.0

    def test_square_law(self):
        assert path_loss(1.0, 2.0, 100.0) == pytest.approx(1e-4, rel=1e-14)

    def test_log_domain_cross_check(self):
        direct = path_loss(1.0, 2.5, 20.0)
        assert direct == pytest.approx(math.exp(-2.5 * math.log(20.0)), rel=1e-13)
        assert direct == pytest.approx(5.59017e-4, rel=1e-5)

    def test_domain(self):
        with pytest.raises(DomainError):
            path_loss(1.0, 2.5, 0.0)


def unit_budget(snr_bob=1.0, snr_eve=1.0):
    # distances of 1 m and exponent 1 so every loss factor is exactly 1
    return LinkBudget(ref_gain=1.0, pl_exponent=1.0, dist_feed_m=1.0, dist_bob_m=1.0,
                      dist_eve_m=1.0, tx_power_w=1.0, noise_bob_w=1.0 / snr_bob,
                      noise_eve_w=1.0 / snr_eve)


class TestBudget:
    def test_derived_quantities(self):
        b = LinkBudget(ref_gain=1.0, pl_exponent=2.5, dist_feed_m=20.0, dist_bob_m=30.0,
                       dist_eve_m=30.0, tx_power_w=1.0, noise_bob_w=1e-12,
                       noise_eve_w=1e-11)
        assert b.avg_snr_bob == pytest.approx(1e12)
        assert b.avg_snr_eve == pytest.approx(1e11)
        assert b.loss_feed == pytest.approx(20.0 ** -2.5)
        assert b.loss_bob == b.loss_eve

    def test_validation(self):
        with pytest.raises(DomainError):
            unit_budget(snr_bob=-1.0)
        with pytest.raises(DomainError):
            LinkBudget(1.0, 2.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0)

    def test_snr_override(self):
        b = unit_budget().with_avg_snr_bob(1e6)
        assert b.avg_snr_bob == pytest.approx(1e6)
        assert b.avg_snr_eve == 1.0


class TestEquivalentChannel:
    def test_single_element_identity(self):
        corr = build_correlation(SurfaceGeometry(1, 1, 0.5, 0.5, 0.1))
        r = draw_channels(ChannelStream(3, 0), 0, corr.sqrt)
        cfg = FrisConfiguration(SelectionSet((0,)), (0.0,), mode="fixed-uniform")
        h = equivalent_channel(r, cfg, "bob")
        assert h == pytest.approx(complex(np.conj(r.u_bob[0]) * r.v_feed[0]))

    def test_empty_selection_contract(self):
        # not constructible through SelectionSet, but the operation is defined
        corr = small_corr()
        r = draw_channels(ChannelStream(3, 0), 0, corr.sqrt)
        empty = SimpleNamespace(selection=SimpleNamespace(
            as_array=lambda: np.array([], dtype=np.intp)), phases=())
        assert equivalent_channel(r, empty, "bob") == 0j

    def test_cophased_is_real_sum_of_magnitudes(self):
        corr = small_corr()
        r = draw_channels(ChannelStream(8, 0), 1, corr.sqrt)
        terms = np.conj(r.u_bob) * r.v_feed
        phases = (-np.angle(terms)) % (2 * math.pi)
        cfg = FrisConfiguration(SelectionSet(tuple(range(corr.n_elements))),
                                tuple(phases), mode="adaptive")
        h = equivalent_channel(r, cfg, "bob")
        assert abs(h.imag) <= 1e-10 * abs(h.real)
        assert h.real == pytest.approx(float(np.sum(np.abs(terms))), rel=1e-12)

    def test_all_selected_zero_phase_is_direct_triple_product(self):
        rng = np.random.default_rng(15)
        for _ in range(10):
            corr = small_corr(side=int(rng.integers(2, 4)), aperture=1.5)
            m = corr.n_elements
            r = draw_channels(ChannelStream(21, 0), int(rng.integers(100)), corr.sqrt)
            cfg = FrisConfiguration(SelectionSet(tuple(range(m))),
                                    tuple(0.0 for _ in range(m)), mode="fixed-uniform")
            h = equivalent_channel(r, cfg, "bob")
            direct = complex(np.conj(r.h_bob) @ corr.matrix @ r.h_feed)
            assert h == pytest.approx(direct, rel=1e-9)

    def test_receiver_validation(self):
        corr = small_corr()
        r = draw_channels(ChannelStream(3, 0), 0, corr.sqrt)
        cfg = FrisConfiguration(SelectionSet((0,)), (0.0,), mode="fixed-uniform")
        with pytest.raises(DomainError):
            equivalent_channel(r, cfg, "mallory")


class TestGainAndSnr:
    def test_channel_gain(self):
        assert channel_gain(0j) == 0.0
        assert channel_gain(3 + 4j) == pytest.approx(25.0)
        assert channel_gain(3 - 4j) == pytest.approx(25.0)

    def test_snr_examples(self):
        assert received_snr(0.0, unit_budget(), "bob") == 0.0
        assert received_snr(1.0, unit_budget(), "bob") == pytest.approx(1.0)

    def test_snr_linear_in_gain_and_power(self):
        b = unit_budget(snr_bob=5.0)
        assert received_snr(2.0, b, "bob") == pytest.approx(2 * received_snr(1.0, b, "bob"))
        b2 = LinkBudget(ref_gain=1.0, pl_exponent=1.0, dist_feed_m=1.0, dist_bob_m=1.0,
                        dist_eve_m=1.0, tx_power_w=2.0, noise_bob_w=0.2, noise_eve_w=1.0)
        assert received_snr(1.0, b2, "bob") == pytest.approx(2 * 5.0)

    def test_negative_gain_rejected(self):
        with pytest.raises(DomainError):
            received_snr(-1.0, unit_budget(), "bob")
