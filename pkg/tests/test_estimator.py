"""Tests for the Monte-Carlo MI estimator."""

import math
from dataclasses import replace

import numpy as np
import pytest

from splitmi import (
    ChannelParams,
    EstimatorConfig,
    MiEstimate,
    NoiseProfile,
    estimate_mi,
    estimate_mi_converged,
    mi_cd_exact,
    mi_ed_upper_bound,
    mi_high_snr,
    sweep_rho,
)
from splitmi.estimator import derive_point_seed


def make_params(power=100.0, sa2=0.01, sc2=1.0, sr2=0.01):
    return ChannelParams(power=power, h_mag=1.0,
                         noise=NoiseProfile(sa2, sc2, sr2))


SMALL = EstimatorConfig(n_outer=20_000, l_mixture=4096, quad_order=32,
                        n_batches=10, seed=7)


class TestConfig:
    def test_defaults(self):
        cfg = EstimatorConfig()
        assert (cfg.n_outer, cfg.l_mixture, cfg.quad_order,
                cfg.n_batches, cfg.seed) == (200_000, 4096, 32, 20, 42)

    def test_batch_divisibility(self):
        with pytest.raises(ValueError):
            EstimatorConfig(n_outer=1001, n_batches=10)

    def test_minimum_batches(self):
        with pytest.raises(ValueError):
            EstimatorConfig(n_outer=700, n_batches=7)

    def test_estimate_invariant(self):
        with pytest.raises(ValueError):
            MiEstimate(bits=-1.0, stderr=0.01, config="x")
        MiEstimate(bits=-0.02, stderr=0.01, config="x")  # within noise: fine


class TestCalibration:
    def test_cd_endpoint_matches_closed_form(self):
        # oracle: the CD receiver is an ordinary Gaussian channel
        params = make_params(power=100.0, sa2=0.01, sc2=1.0)
        exact = math.log2(1 + 100.0 / 1.01)
        est = estimate_mi(params, 1.0, replace(SMALL, l_mixture=16384))
        assert abs(est.bits - exact) < max(2 * est.stderr, 0.02)

    def test_reference_interior_point(self):
        # reference tables put the optimally split receiver 1.68 bits
        # above the CD baseline at this scenario
        params = make_params(power=100.0)
        expect = mi_cd_exact(params) + 1.68
        rep = estimate_mi_converged(params, 0.56, SMALL, shift_tol=0.01)
        assert rep.converged
        assert abs(rep.estimate.bits - expect) < max(0.1, 3 * rep.estimate.stderr)

    def test_vanishing_power(self):
        params = make_params(power=1e-8)
        est = estimate_mi(params, 0.5, replace(SMALL, n_outer=5000, l_mixture=1024))
        assert abs(est.bits) < max(3 * est.stderr, 1e-3)

    def test_ed_endpoint_respects_upper_bound(self):
        params = make_params(power=100.0)
        est = estimate_mi(params, 0.0, replace(SMALL, l_mixture=16384))
        assert est.bits <= mi_ed_upper_bound(params) + 2 * est.stderr

    def test_agreement_with_high_snr_form(self):
        params = make_params(power=100.0)
        for rho in (0.3, 0.8):
            rep = estimate_mi_converged(params, rho, SMALL, shift_tol=0.01)
            assert abs(rep.estimate.bits - mi_high_snr(params, rho)) <= 0.15


class TestDeterminism:
    def test_bit_identical_reruns(self):
        params = make_params()
        a = estimate_mi(params, 0.4, SMALL)
        b = estimate_mi(params, 0.4, SMALL)
        assert a.bits == b.bits and a.stderr == b.stderr

    def test_independent_of_worker_count(self):
        params = make_params()
        a = estimate_mi(params, 0.4, SMALL, workers=1)
        b = estimate_mi(params, 0.4, SMALL, workers=2)
        c = estimate_mi(params, 0.4, SMALL, workers=5)
        assert a.bits == b.bits == c.bits
        assert a.stderr == b.stderr == c.stderr

    def test_fingerprint_records_configuration(self):
        est = estimate_mi(make_params(), 0.4,
                          replace(SMALL, n_outer=5000, l_mixture=1024, n_batches=10))
        assert "l_mixture=1024" in est.config and "marginal=radial" in est.config


class TestStatistics:
    def test_stderr_shrinks_with_sample_count(self):
        params = make_params(power=10.0)
        base = replace(SMALL, n_outer=16_000, n_batches=80, l_mixture=2048)
        a = estimate_mi(params, 0.5, base)
        b = estimate_mi(params, 0.5, replace(base, n_outer=32_000))
        ratio = b.stderr / a.stderr
        assert ratio == pytest.approx(1 / math.sqrt(2), abs=0.2 / math.sqrt(2))

    def test_mixture_doubling_check_converges(self):
        params = make_params(power=10.0)
        rep = estimate_mi_converged(params, 0.5,
                                    replace(SMALL, n_outer=10_000, l_mixture=2048),
                                    shift_tol=0.02)
        assert rep.converged
        assert abs(rep.history[-1][1].bits - rep.history[-2][1].bits) < 0.02

    def test_pointwise_marginal_agrees_at_low_power(self):
        # the raw per-draw mixture needs no phase help at low SNR; the
        # two marginal forms must agree within combined noise
        params = make_params(power=5.0)
        a = estimate_mi(params, 0.5, SMALL, marginal="radial")
        b = estimate_mi(params, 0.5, SMALL, marginal="pointwise")
        assert abs(a.bits - b.bits) < 3 * math.hypot(a.stderr, b.stderr) + 0.02


class TestSweep:
    def test_single_point_grid_matches_estimate_mi(self):
        params = make_params()
        cfg = replace(SMALL, n_outer=5000, l_mixture=1024)
        (rho, est), = sweep_rho(params, [1.0], cfg)
        direct = estimate_mi(params, 1.0,
                             replace(cfg, seed=derive_point_seed(cfg.seed, 0)))
        assert rho == 1.0 and est.bits == direct.bits

    def test_interior_beats_both_endpoints(self):
        # comparable conversion and antenna noise, small rectifier noise:
        # splitting wins over both single-chain receivers
        params = make_params(power=100.0, sa2=1.0, sc2=1.0, sr2=0.01)
        cfg = replace(SMALL, quad_order=64, l_mixture=8192)
        results = dict()
        for rho, est in sweep_rho(params, [0.0, 0.5, 1.0], cfg):
            results[rho] = est
        assert results[0.5].bits > results[0.0].bits + 3 * math.hypot(
            results[0.5].stderr, results[0.0].stderr)
        assert results[0.5].bits > results[1.0].bits + 3 * math.hypot(
            results[0.5].stderr, results[1.0].stderr)

    def test_curve_peaks_near_optimal_ratio(self):
        params = make_params(power=100.0)
        grid = [0.41, 0.51, 0.61, 0.71, 0.81]
        cfg = replace(SMALL, n_outer=10_000, l_mixture=8192)
        results = sweep_rho(params, grid, cfg)
        best = max(results, key=lambda t: t[1].bits)[0]
        assert abs(best - 0.56) <= 0.1

    def test_grid_validation(self):
        params = make_params()
        with pytest.raises(ValueError):
            sweep_rho(params, [], SMALL)
        with pytest.raises(ValueError):
            sweep_rho(params, [0.5, 0.5], SMALL)
        with pytest.raises(ValueError):
            sweep_rho(params, [0.8, 0.2], SMALL)
