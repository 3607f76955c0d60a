import math

import numpy as np
import pytest

from sqzkit import (
    DomainError,
    InvalidParameterError,
    LossBudget,
    ModelValidityError,
    PumpSqueezeModel,
    SourceSpecs,
    apply_loss,
    eta_electronic,
    eta_total,
    from_db,
    infer_source_variance,
    measured_variance,
    pair_flux,
    pump_budget,
    quadrature_variance,
    solve_waveguide_loss,
    squeezed_vacuum,
    to_db,
)

PAPER_MODEL = PumpSqueezeModel(mu=0.101, eta=0.54)


class TestEtaElectronic:
    def test_clearance_15_6_db(self):
        # (S-1)/S with S = 10^1.56
        assert eta_electronic(15.6) == pytest.approx(0.9724577129666183, rel=1e-12)

    def test_noiseless_limit(self):
        assert eta_electronic(200.0) == pytest.approx(1.0, abs=1e-12)

    def test_snr_of_two(self):
        assert eta_electronic(10.0 * math.log10(2.0)) == pytest.approx(0.5, rel=1e-12)

    @pytest.mark.parametrize("bad", [0.0, -3.0, math.nan])
    def test_rejects_no_clearance(self, bad):
        with pytest.raises(InvalidParameterError):
            eta_electronic(bad)


class TestEtaTotal:
    def test_component_chain(self):
        budget = LossBudget(0.80, 0.95, 0.88, eta_electronic(15.6))
        # oracle: plain product, alpha defaults to 0
        assert eta_total(budget) == pytest.approx(
            0.80 * 0.95 * 0.88 * eta_electronic(15.6), rel=1e-14)
        assert eta_total(budget) == pytest.approx(0.650, abs=5e-3)

    def test_lossless_chain(self):
        assert eta_total(LossBudget(1.0, 1.0, 1.0, 1.0)) == 1.0

    def test_waveguide_factor(self):
        base = LossBudget(0.80, 0.95, 0.88, eta_electronic(15.6))
        full = LossBudget(0.80, 0.95, 0.88, eta_electronic(15.6),
                          alpha_wg_db_per_cm=0.4, length_cm=4.0,
                          effective_length_fraction=0.5)
        assert eta_total(full) == pytest.approx(eta_total(base) * 10 ** (-0.08), rel=1e-14)
        assert eta_total(full) == pytest.approx(0.54, abs=5e-3)

    def test_budget_validation(self):
        with pytest.raises(InvalidParameterError):
            LossBudget(1.2, 0.95, 0.88, 0.97)
        with pytest.raises(InvalidParameterError):
            LossBudget(0.8, 0.95, 0.88, 0.97, alpha_wg_db_per_cm=-0.1)
        with pytest.raises(InvalidParameterError):
            LossBudget(0.8, 0.95, 0.88, 0.97, length_cm=0.0)
        with pytest.raises(InvalidParameterError):
            LossBudget(0.8, 0.95, 0.88, 0.97, effective_length_fraction=0.0)


class TestMeasuredVariance:
    def test_no_pump_is_shot_noise(self):
        for theta in (0.0, 0.7, math.pi / 2):
            assert measured_variance(PAPER_MODEL, 0.0, theta) == pytest.approx(1.0, abs=1e-15)

    def test_fitted_point_at_28_mw(self):
        # direct evaluation with r = 0.101 * sqrt(28)
        squeezing = measured_variance(PAPER_MODEL, 28.0, math.pi / 2)
        anti = measured_variance(PAPER_MODEL, 28.0, 0.0)
        assert squeezing == pytest.approx(0.6454315126604686, rel=1e-12)
        assert anti == pytest.approx(2.032548246068237, rel=1e-12)
        assert to_db(squeezing) == pytest.approx(-1.90, abs=5e-3)
        assert to_db(anti) == pytest.approx(3.08, abs=5e-3)

    def test_matches_state_pipeline(self):
        rng = np.random.default_rng(31)
        for _ in range(300):
            mu = rng.uniform(0.0, 0.3)
            eta = rng.uniform(0.0, 1.0)
            power = rng.uniform(0.0, 40.0)
            theta = rng.uniform(0.0, 2 * math.pi)
            model = PumpSqueezeModel(mu, eta)
            direct = measured_variance(model, power, theta)
            state = apply_loss(squeezed_vacuum(mu * math.sqrt(power)), eta)
            assert direct == pytest.approx(
                quadrature_variance(state, theta), abs=1e-12, rel=1e-12)

    def test_purity_bound(self):
        rng = np.random.default_rng(37)
        for _ in range(300):
            model = PumpSqueezeModel(rng.uniform(0.01, 0.3), rng.uniform(0.0, 1.0))
            power = rng.uniform(0.1, 40.0)
            product = (measured_variance(model, power, 0.0)
                       * measured_variance(model, power, math.pi / 2))
            assert product >= 1.0 - 1e-12
        # equality at eta = 1 (pure state)
        pure = PumpSqueezeModel(0.12, 1.0)
        product = measured_variance(pure, 20.0, 0.0) * measured_variance(pure, 20.0, math.pi / 2)
        assert product == pytest.approx(1.0, abs=1e-12)

    def test_monotonic_in_power(self):
        powers = np.linspace(0.5, 40.0, 50)
        squeezing = [measured_variance(PAPER_MODEL, p, math.pi / 2) for p in powers]
        anti = [measured_variance(PAPER_MODEL, p, 0.0) for p in powers]
        assert np.all(np.diff(squeezing) < 0)
        assert np.all(np.diff(anti) > 0)

    def test_rejects_negative_power(self):
        with pytest.raises(InvalidParameterError):
            measured_variance(PAPER_MODEL, -1.0, 0.0)

    def test_mu_zero_degenerate_model(self):
        flat = PumpSqueezeModel(0.0, 0.54)
        assert measured_variance(flat, 28.0, 0.3) == pytest.approx(1.0, abs=1e-15)

    def test_model_validation(self):
        with pytest.raises(InvalidParameterError):
            PumpSqueezeModel(-0.1, 0.5)
        with pytest.raises(InvalidParameterError):
            PumpSqueezeModel(0.1, 1.5)


class TestInferSourceVariance:
    def test_measured_to_source(self):
        # (0.65615 - 0.3503) / 0.6497 in dB
        assert infer_source_variance(-1.83, 0.6497) == pytest.approx(-3.272, abs=5e-3)
        assert infer_source_variance(-1.83, 0.650) == pytest.approx(-3.3, abs=0.05)

    def test_shot_noise_fixed_point(self):
        for eta in (0.2, 0.65, 1.0):
            assert infer_source_variance(0.0, eta) == pytest.approx(0.0, abs=1e-12)

    def test_lossless_identity(self):
        assert infer_source_variance(-1.83, 1.0) == pytest.approx(-1.83, rel=1e-12)

    def test_round_trip_through_loss(self):
        rng = np.random.default_rng(41)
        for _ in range(200):
            source_db = rng.uniform(-10.0, 6.0)
            eta = rng.uniform(0.05, 1.0)
            measured = eta * from_db(source_db) + 1.0 - eta
            assert infer_source_variance(to_db(measured), eta) == pytest.approx(
                source_db, abs=1e-10)

    def test_rejects_unphysical_level(self):
        # measured variance below the loss floor 1 - eta
        with pytest.raises(DomainError):
            infer_source_variance(-6.0, 0.65)

    def test_rejects_bad_eta(self):
        with pytest.raises(InvalidParameterError):
            infer_source_variance(-1.0, 0.0)


class TestSolveWaveguideLoss:
    def test_budget_gap(self):
        assert solve_waveguide_loss(0.54, 0.6497, 4.0, 0.5) == pytest.approx(0.40, abs=0.03)
        # exact oracle
        assert solve_waveguide_loss(0.54, 0.6497, 4.0, 0.5) == pytest.approx(
            -10.0 * math.log10(0.54 / 0.6497) / 2.0, rel=1e-14)

    def test_no_gap_no_loss(self):
        assert solve_waveguide_loss(0.65, 0.65, 4.0, 0.5) == pytest.approx(0.0, abs=1e-12)

    def test_full_length_convention(self):
        half = solve_waveguide_loss(0.54, 0.6497, 4.0, 0.5)
        full = solve_waveguide_loss(0.54, 0.6497, 4.0, 1.0)
        assert full == pytest.approx(half / 2.0, rel=1e-12)

    def test_inverts_waveguide_factor(self):
        rng = np.random.default_rng(43)
        for _ in range(200):
            alpha = rng.uniform(0.0, 2.0)
            length = rng.uniform(0.5, 10.0)
            fraction = rng.uniform(0.1, 1.0)
            eta_est = rng.uniform(0.3, 1.0)
            budget = LossBudget(eta_est, 1.0, 1.0, 1.0, alpha_wg_db_per_cm=alpha,
                                length_cm=length, effective_length_fraction=fraction)
            eta_fit = eta_total(budget)
            assert solve_waveguide_loss(eta_fit, eta_est, length, fraction) == pytest.approx(
                alpha, abs=1e-10)

    def test_rejects_fit_above_budget(self):
        with pytest.raises(DomainError):
            solve_waveguide_loss(0.7, 0.65, 4.0, 0.5)


class TestPumpBudget:
    def test_zero_power(self):
        assert pump_budget(0.0, SourceSpecs()) == 0.0

    def test_paper_operating_point(self):
        # oracle: 0.43 * 20 * 0.057^2 W in mW
        assert pump_budget(0.057, SourceSpecs()) == pytest.approx(27.9414, rel=1e-12)
        assert pump_budget(0.057, SourceSpecs()) == pytest.approx(28.0, abs=0.1)

    def test_rejects_depleted_regime(self):
        # coupled power would exceed the fundamental input
        specs = SourceSpecs(shg_efficiency_per_w=20.0, pump_coupling=1.0)
        with pytest.raises(ModelValidityError):
            pump_budget(0.1, specs)

    def test_rejects_negative_power(self):
        with pytest.raises(InvalidParameterError):
            pump_budget(-0.01, SourceSpecs())

    def test_specs_validation(self):
        with pytest.raises(InvalidParameterError):
            SourceSpecs(pump_coupling=1.2)
        with pytest.raises(InvalidParameterError):
            SourceSpecs(shg_efficiency_per_w=0.0)


class TestPairFlux:
    def test_zero_power(self):
        assert pair_flux(0.0, SourceSpecs()) == 0.0

    def test_per_mw(self):
        assert pair_flux(1.0, SourceSpecs()) == pytest.approx(1.2e10, rel=1e-12)

    def test_full_power(self):
        assert pair_flux(28.0, SourceSpecs()) == pytest.approx(3.36e11, rel=1e-12)
