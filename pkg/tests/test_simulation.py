import math

import pytest

from levypassage import (
    DomainError,
    SimConfig,
    ValidationError,
    brownian,
    cramer_lundberg,
    first_passage,
    inverse_psi_prime,
    jump_diffusion,
    mc_plain,
    mc_tilted,
    clt_diagnostic,
)

LOG_BM_X2_T1 = -5.459479482712505  # exact reflection-formula value
P_BM_X2_T1 = math.exp(LOG_BM_X2_T1)
P_CL_X2_T10 = 0.180039601262  # exact, via the ruin-time Laplace transform


def as_p(result):
    return math.exp(result.log_estimate)


def combined_se(r1, r2):
    p1, p2 = as_p(r1), as_p(r2)
    return math.sqrt((p1 * r1.std_err_rel) ** 2 + (p2 * r2.std_err_rel) ** 2)


class TestFirstPassage:
    def test_barrier_at_start_hits_immediately(self, bm):
        for i in range(25):
            res = first_passage(bm, 0.0, 1.0, (123, i))
            assert res.hit
            assert res.tau <= 0.01 + 1e-12

    def test_monotone_model_rejected_before_simulation(self):
        with pytest.raises(ValidationError):
            brownian(1.0, 0.0)

    def test_deterministic_per_seed(self, bm):
        a = first_passage(bm, 1.0, 2.0, (9, 4))
        b = first_passage(bm, 1.0, 2.0, (9, 4))
        assert a == b
        c = first_passage(bm, 1.0, 2.0, (9, 5))
        assert a != c

    def test_reports_terminal_value(self, bm):
        res = first_passage(bm, 50.0, 1.0, (1, 0))
        assert not res.hit and res.tau is None and res.x_at_tau is None
        assert -6.0 < res.x_at_horizon < 4.0

    def test_jump_crossing_has_positive_overshoot(self, cl):
        overshoots = []
        for i in range(1500):
            res = first_passage(cl, 1.0, 10.0, (77, i))
            if res.hit:
                assert res.x_at_tau > 1.0
                overshoots.append(res.x_at_tau - 1.0)
        # overshoot of Exp(1) claims is Exp(1) by lack of memory
        assert len(overshoots) > 200
        mean = sum(overshoots) / len(overshoots)
        assert mean == pytest.approx(1.0, abs=0.2)

    def test_input_validation(self, bm):
        with pytest.raises(ValueError):
            first_passage(bm, -1.0, 1.0, 0)
        with pytest.raises(ValueError):
            first_passage(bm, 1.0, 0.0, 0)


class TestPlainMc:
    def test_brownian_within_3se_of_oracle(self, bm):
        res = mc_plain(bm, 2.0, 1.0, SimConfig(n_paths=100_000, master_seed=2))
        p = as_p(res)
        assert abs(p - P_BM_X2_T1) <= 3.0 * p * res.std_err_rel
        assert res.std_err_rel == pytest.approx(
            math.sqrt((1.0 - p) / (p * res.n_paths)), rel=1e-12
        )

    def test_cl_within_3se_of_transform_oracle(self, cl):
        res = mc_plain(cl, 2.0, 10.0, SimConfig(n_paths=60_000, master_seed=5))
        p = as_p(res)
        assert abs(p - P_CL_X2_T10) <= 3.0 * p * res.std_err_rel

    def test_barrier_at_zero_estimates_one(self, bm):
        res = mc_plain(bm, 1e-12, 0.5, SimConfig(n_paths=2_000, master_seed=1))
        assert res.n_hits == res.n_paths
        assert res.log_estimate == 0.0

    def test_no_time_no_hits(self, bm):
        res = mc_plain(bm, 2.0, 0.01, SimConfig(n_paths=2_000, master_seed=1))
        assert res.n_hits == 0
        assert res.log_estimate == -math.inf
        assert res.degenerate
        assert res.std_err_rel == math.inf

    def test_matches_first_passage_composition(self, bm):
        cfg = SimConfig(n_paths=64, master_seed=31)
        res = mc_plain(bm, 1.0, 1.0, cfg)
        hits = sum(first_passage(bm, 1.0, 1.0, (31, i), time_step=cfg.time_step).hit for i in range(64))
        assert res.n_hits == hits


class TestTiltedMc:
    def test_agrees_with_plain_and_oracle(self, bm):
        plain = mc_plain(bm, 2.0, 1.0, SimConfig(n_paths=80_000, master_seed=3))
        tilted = mc_tilted(bm, 2.0, 1.0, SimConfig(n_paths=20_000, master_seed=3, tilt=3.0))
        assert abs(as_p(plain) - as_p(tilted)) <= 3.0 * combined_se(plain, tilted)
        assert abs(as_p(tilted) - P_BM_X2_T1) <= 3.0 * as_p(tilted) * tilted.std_err_rel
        assert tilted.std_err_rel < plain.std_err_rel  # variance reduction

    def test_cl_agrees_with_transform_oracle(self, cl):
        tilted = mc_tilted(cl, 2.0, 10.0, SimConfig(n_paths=30_000, master_seed=4, tilt=0.4))
        p = as_p(tilted)
        assert abs(p - P_CL_X2_T10) <= 3.0 * p * tilted.std_err_rel

    def test_zero_tilt_reproduces_plain(self, bm):
        plain = mc_plain(bm, 2.0, 1.0, SimConfig(n_paths=5_000, master_seed=8))
        zero = mc_tilted(bm, 2.0, 1.0, SimConfig(n_paths=5_000, master_seed=8, tilt=0.0))
        assert zero.log_estimate == plain.log_estimate
        assert zero.n_hits == plain.n_hits
        assert zero.std_err_rel == plain.std_err_rel

    def test_default_tilt_is_inverse_slope(self, bm):
        res = mc_tilted(bm, 2.0, 1.0, SimConfig(n_paths=500, master_seed=1))
        assert res.tilt_used == pytest.approx(inverse_psi_prime(bm, 2.0), rel=1e-12)

    def test_deep_tail_reachable(self, bm):
        from levypassage import ld_prefactor

        res = mc_tilted(bm, 30.0, 10.0, SimConfig(n_paths=3_000, master_seed=6, tilt=4.0))
        assert res.n_hits > 1_000
        # psi*(3) = 8, so log P ~ log D_3 - log(10)/2 - 80; far below underflow
        log_theorem = math.log(ld_prefactor(bm, 3.0)) - 0.5 * math.log(10.0) - 80.0
        assert res.log_estimate == pytest.approx(log_theorem, abs=0.5)

    def test_tilt_outside_domain_rejected(self, cl):
        with pytest.raises(DomainError):
            mc_tilted(cl, 2.0, 10.0, SimConfig(n_paths=100, master_seed=0, tilt=1.5))

    def test_jump_diffusion_plain_vs_tilted(self, jd):
        plain = mc_plain(jd, 3.0, 4.0, SimConfig(n_paths=60_000, master_seed=12))
        tilted = mc_tilted(jd, 3.0, 4.0, SimConfig(n_paths=20_000, master_seed=12))
        assert plain.n_hits >= 100 and tilted.n_hits >= 100
        assert abs(as_p(plain) - as_p(tilted)) <= 3.0 * combined_se(plain, tilted)


class TestDeterminism:
    def test_worker_count_invariance(self, bm):
        results = [
            mc_plain(bm, 2.0, 1.0, SimConfig(n_paths=10_000, master_seed=3, n_workers=w))
            for w in (1, 2, 5)
        ]
        assert results[0] == results[1] == results[2]

    def test_worker_count_invariance_tilted(self, cl):
        a = mc_tilted(cl, 5.0, 5.0, SimConfig(n_paths=9_000, master_seed=21, tilt=0.4, n_workers=1))
        b = mc_tilted(cl, 5.0, 5.0, SimConfig(n_paths=9_000, master_seed=21, tilt=0.4, n_workers=4))
        assert a == b

    def test_same_seed_same_result(self, jd):
        a = mc_plain(jd, 2.0, 2.0, SimConfig(n_paths=4_000, master_seed=9))
        b = mc_plain(jd, 2.0, 2.0, SimConfig(n_paths=4_000, master_seed=9))
        assert a == b

    def test_different_seed_different_result(self, bm):
        a = mc_plain(bm, 2.0, 1.0, SimConfig(n_paths=20_000, master_seed=1))
        b = mc_plain(bm, 2.0, 1.0, SimConfig(n_paths=20_000, master_seed=2))
        assert a.log_estimate != b.log_estimate


class TestBridgeCorrection:
    def test_never_removes_hits_per_path(self, bm):
        added = 0
        for i in range(400):
            on = first_passage(bm, 1.2, 1.0, (55, i), time_step=0.1, barrier_correction=True)
            off = first_passage(bm, 1.2, 1.0, (55, i), time_step=0.1, barrier_correction=False)
            assert on.hit >= off.hit
            added += on.hit and not off.hit
        assert added > 0  # at this coarse step the bridge finds extra crossings

    def test_removes_coarse_step_bias(self, bm):
        coarse = SimConfig(n_paths=40_000, master_seed=14, time_step=0.25)
        corrected = mc_plain(bm, 2.0, 1.0, coarse)
        uncorrected = mc_plain(
            bm, 2.0, 1.0, SimConfig(n_paths=40_000, master_seed=14, time_step=0.25, barrier_correction=False)
        )
        p_corr, p_raw = as_p(corrected), as_p(uncorrected)
        assert abs(p_corr - P_BM_X2_T1) <= 3.0 * p_corr * corrected.std_err_rel
        assert p_raw < P_BM_X2_T1 * 0.75  # skeleton alone misses most crossings

    def test_time_step_convergence(self, bm):
        a = mc_plain(bm, 2.0, 1.0, SimConfig(n_paths=100_000, master_seed=4, time_step=1 / 64))
        b = mc_plain(bm, 2.0, 1.0, SimConfig(n_paths=100_000, master_seed=4, time_step=1 / 128))
        assert abs(as_p(a) - as_p(b)) <= 2.0 * combined_se(a, b)


class TestDoobBound:
    def test_plain_estimate(self, bm):
        res = mc_plain(bm, 1.0, 20.0, SimConfig(n_paths=20_000, master_seed=10))
        lhs = math.exp(2.0 * 1.0 + res.log_estimate)
        assert lhs <= 1.0 + 3.0 * res.std_err_rel

    def test_tilted_at_lundberg_root_is_sharp(self, bm):
        # weights are e^{-gamma(X_tau - x)} = 1 for continuous crossings,
        # so e^{gamma x} * estimate is exactly the hit fraction
        for x in (1.0, 2.0, 5.0):
            res = mc_tilted(bm, x, 50.0, SimConfig(n_paths=4_000, master_seed=10, tilt=2.0))
            lhs = math.exp(2.0 * x + res.log_estimate)
            assert lhs <= 1.0 + 1e-12
            assert lhs == pytest.approx(res.n_hits / res.n_paths, rel=1e-12)


class TestCltDiagnostic:
    def test_moderate_barrier(self, bm):
        diag = clt_diagnostic(bm, 50.0, 2.0, SimConfig(n_paths=3_000, master_seed=5))
        assert diag.n >= 2_990
        assert abs(diag.mean_z) <= 0.1
        assert 0.8 <= diag.var_z <= 1.2

    def test_mean_crossing_time_matches_slope(self, bm):
        diag = clt_diagnostic(bm, 50.0, 2.0, SimConfig(n_paths=3_000, master_seed=5))
        omega = math.sqrt(1.0 / 8.0)  # psi''(Gamma(2)) / v^3 for this model
        mean_tau = 25.0 + diag.mean_z * omega * math.sqrt(50.0)
        assert mean_tau == pytest.approx(25.0, rel=0.01)

    def test_spectrally_positive_model(self, cl):
        diag = clt_diagnostic(cl, 60.0, 3.0, SimConfig(n_paths=2_000, master_seed=6))
        assert diag.n >= 1_990
        assert abs(diag.mean_z) <= 0.15
        assert 0.75 <= diag.var_z <= 1.25


class TestSimConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            SimConfig(n_paths=0)
        with pytest.raises(ValueError):
            SimConfig(time_step=0.0)
        with pytest.raises(ValueError):
            SimConfig(n_workers=0)
