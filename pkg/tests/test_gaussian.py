import math

import numpy as np
import pytest

from sqzkit import (
    GaussianState,
    InvalidParameterError,
    InvalidStateError,
    SymplecticOp,
    apply_loss,
    apply_symplectic,
    beam_splitter_50_50,
    beamsplitter_op,
    from_db,
    phase_rotation,
    quadrature_variance,
    rotation_op,
    squeeze_op,
    squeezed_vacuum,
    symplectic_eigenvalues,
    symplectic_form,
    to_db,
    vacuum,
)


def random_state(rng, n_modes=1):
    """Random physical state: squeezed vacua, rotated, lossy, optionally mixed."""
    if n_modes == 1:
        state = squeezed_vacuum(rng.uniform(0.0, 1.5))
        state = phase_rotation(state, rng.uniform(0.0, 2.0 * math.pi))
        return apply_loss(state, rng.uniform(0.1, 1.0))
    a = random_state(rng, 1)
    b = random_state(rng, 1)
    return beam_splitter_50_50(a, b)


class TestGaussianState:
    def test_vacuum_is_identity(self):
        np.testing.assert_allclose(vacuum(1).cov, np.eye(2))
        np.testing.assert_allclose(vacuum(2).cov, np.eye(4))

    def test_rejects_asymmetric(self):
        with pytest.raises(InvalidStateError, match="symmetric"):
            GaussianState(np.array([[1.0, 0.1], [0.0, 1.0]]))

    def test_rejects_non_positive_definite(self):
        with pytest.raises(InvalidStateError, match="positive definite"):
            GaussianState(np.diag([1.0, -0.5]))

    def test_rejects_uncertainty_violation(self):
        # both quadratures below shot noise at once
        with pytest.raises(InvalidStateError, match="uncertainty"):
            GaussianState(np.diag([0.5, 0.5]))

    def test_rejects_three_modes(self):
        with pytest.raises(InvalidStateError, match="modes"):
            GaussianState(np.eye(6))

    def test_cov_is_immutable(self):
        state = vacuum(1)
        with pytest.raises(ValueError):
            state.cov[0, 0] = 2.0


class TestSqueezedVacuum:
    def test_zero_squeezing_is_vacuum(self):
        np.testing.assert_allclose(squeezed_vacuum(0.0).cov, np.eye(2))

    def test_half_unit_squeezing(self):
        # analytic: diag(e, 1/e)
        cov = squeezed_vacuum(0.5).cov
        np.testing.assert_allclose(np.diag(cov), [math.e, 1.0 / math.e], rtol=1e-15)

    def test_paper_regime_value(self):
        # direct evaluation of e^{+-2r} at r = 0.534
        cov = squeezed_vacuum(0.534).cov
        np.testing.assert_allclose(
            np.diag(cov), [math.exp(1.068), math.exp(-1.068)], rtol=1e-15)
        assert cov[0, 1] == 0.0

    def test_x_antisqueezed_p_squeezed(self):
        state = squeezed_vacuum(0.3)
        assert quadrature_variance(state, 0.0) > 1.0 > quadrature_variance(state, math.pi / 2)

    @pytest.mark.parametrize("bad", [-0.1, math.nan, math.inf])
    def test_rejects_bad_r(self, bad):
        with pytest.raises(InvalidParameterError):
            squeezed_vacuum(bad)


class TestApplyLoss:
    def test_vacuum_is_fixed_point(self):
        np.testing.assert_allclose(apply_loss(vacuum(1), 0.3).cov, np.eye(2), atol=1e-15)

    def test_affine_map_on_diagonal(self):
        # oracle: 0.54 * v + 0.46 per entry of the stated input
        state = GaussianState(np.diag([2.913, 0.3433]))
        out = apply_loss(state, 0.54)
        np.testing.assert_allclose(
            np.diag(out.cov), [0.54 * 2.913 + 0.46, 0.54 * 0.3433 + 0.46], rtol=1e-14)

    def test_full_loss_gives_vacuum(self):
        state = squeezed_vacuum(1.2)
        np.testing.assert_allclose(apply_loss(state, 0.0).cov, np.eye(2), atol=1e-15)

    def test_per_mode_transmissions(self):
        joint = beam_splitter_50_50(squeezed_vacuum(0.4), vacuum(1))
        out = apply_loss(joint, [0.5, 1.0])
        # mode-0 diagonal block gets the vacuum admixture, cross block sqrt(0.5)
        expected = np.sqrt(np.outer([0.5, 0.5, 1, 1], [0.5, 0.5, 1, 1])) * joint.cov
        expected += np.diag([0.5, 0.5, 0.0, 0.0])
        np.testing.assert_allclose(out.cov, expected, atol=1e-14)

    @pytest.mark.parametrize("bad", [-0.01, 1.01, math.nan])
    def test_rejects_bad_eta(self, bad):
        with pytest.raises(InvalidParameterError):
            apply_loss(vacuum(1), bad)

    def test_composition_is_product(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            state = random_state(rng)
            e1, e2 = rng.uniform(0.0, 1.0, 2)
            lhs = apply_loss(apply_loss(state, e1), e2)
            rhs = apply_loss(state, e1 * e2)
            np.testing.assert_allclose(lhs.cov, rhs.cov, atol=1e-12)


class TestPhaseRotation:
    def test_identity_rotation(self):
        state = squeezed_vacuum(0.7)
        np.testing.assert_allclose(phase_rotation(state, 0.0).cov, state.cov, atol=1e-15)

    def test_quarter_turn_swaps_quadratures(self):
        state = GaussianState(np.diag([2.0, 0.6]))
        out = phase_rotation(state, math.pi / 2)
        np.testing.assert_allclose(np.diag(out.cov), [0.6, 2.0], atol=1e-14)

    def test_pi_over_4_gives_cosh(self):
        # analytic rotation of diag(e^{2r}, e^{-2r}): x variance -> cosh(2r)
        r = 0.534
        out = phase_rotation(squeezed_vacuum(r), math.pi / 4)
        assert out.cov[0, 0] == pytest.approx(math.cosh(2 * r), rel=1e-14)

    def test_rotation_consistency(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            state = random_state(rng)
            theta = rng.uniform(-2.0 * math.pi, 2.0 * math.pi)
            direct = quadrature_variance(state, theta)
            rotated = quadrature_variance(phase_rotation(state, theta), 0.0)
            assert rotated == pytest.approx(direct, abs=1e-12)

    def test_bad_mode_index(self):
        with pytest.raises(InvalidParameterError):
            phase_rotation(vacuum(1), 0.3, mode=1)


class TestBeamSplitter:
    def test_vacuum_invariance(self):
        out = beam_splitter_50_50(vacuum(1), vacuum(1))
        np.testing.assert_allclose(out.cov, np.eye(4), atol=1e-15)

    def test_epr_difference_variance(self):
        # x-squeezed (x) and p-squeezed inputs: Var((x1-x2)/sqrt2) = e^{-2r}
        r = 0.6
        in_x = phase_rotation(squeezed_vacuum(r), math.pi / 2)  # squeezed in x
        in_p = squeezed_vacuum(r)                               # squeezed in p
        out = beam_splitter_50_50(in_x, in_p)
        u = np.array([1.0, 0.0, -1.0, 0.0]) / math.sqrt(2.0)
        v = np.array([0.0, 1.0, 0.0, 1.0]) / math.sqrt(2.0)
        assert u @ out.cov @ u == pytest.approx(math.exp(-2 * r), rel=1e-13)
        assert v @ out.cov @ v == pytest.approx(math.exp(-2 * r), rel=1e-13)

    def test_parallel_squeezers_stay_uncorrelated(self):
        out = beam_splitter_50_50(squeezed_vacuum(0.8), squeezed_vacuum(0.8))
        np.testing.assert_allclose(out.cov[:2, 2:], np.zeros((2, 2)), atol=1e-13)

    def test_preserves_symplectic_spectrum(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            a, b = random_state(rng), random_state(rng)
            joint = np.zeros((4, 4))
            joint[:2, :2], joint[2:, 2:] = a.cov, b.cov
            before = symplectic_eigenvalues(joint)
            after = symplectic_eigenvalues(beam_splitter_50_50(a, b).cov)
            np.testing.assert_allclose(np.sort(after), np.sort(before), atol=1e-10)

    def test_rejects_two_mode_input(self):
        two = beam_splitter_50_50(vacuum(1), vacuum(1))
        with pytest.raises(InvalidParameterError):
            beam_splitter_50_50(two, vacuum(1))


class TestQuadratureVariance:
    def test_vacuum_shot_noise(self):
        for theta in np.linspace(0.0, 2.0 * math.pi, 9):
            assert quadrature_variance(vacuum(1), theta) == pytest.approx(1.0, abs=1e-15)

    def test_lossy_squeezed_endpoints(self):
        state = GaussianState(np.diag([2.033, 0.6454]))
        assert quadrature_variance(state, math.pi / 2) == pytest.approx(0.6454, abs=1e-14)
        assert quadrature_variance(state, 0.0) == pytest.approx(2.033, abs=1e-14)
        assert to_db(0.6454) == pytest.approx(-1.9017, abs=5e-5)
        assert to_db(2.033) == pytest.approx(3.0814, abs=5e-5)

    def test_not_below_smallest_eigenvalue(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            state = random_state(rng)
            smallest = np.linalg.eigvalsh(state.mode_block(0)).min()
            theta = rng.uniform(0.0, math.pi)
            assert quadrature_variance(state, theta) >= smallest - 1e-12

    def test_bad_mode(self):
        with pytest.raises(InvalidParameterError):
            quadrature_variance(vacuum(1), 0.0, mode=2)


class TestDecibels:
    def test_shot_noise_is_zero_db(self):
        assert to_db(1.0) == 0.0

    def test_measured_levels(self):
        # oracles: 10^(-0.183) and 10^(0.279)
        assert from_db(-1.83) == pytest.approx(0.6561452663029054, rel=1e-15)
        assert from_db(2.79) == pytest.approx(1.9010782799233001, rel=1e-15)

    def test_round_trip(self):
        rng = np.random.default_rng(13)
        for v in rng.uniform(1e-3, 1e3, 100):
            assert from_db(to_db(v)) == pytest.approx(v, rel=1e-12)

    @pytest.mark.parametrize("bad", [0.0, -1.0, math.nan])
    def test_rejects_nonpositive(self, bad):
        with pytest.raises(InvalidParameterError):
            to_db(bad)


class TestSymplecticOps:
    def test_form_is_preserved(self):
        rng = np.random.default_rng(17)
        ops = [beamsplitter_op()]
        ops += [rotation_op(rng.uniform(0, 2 * math.pi), 2, rng.integers(0, 2))
                for _ in range(50)]
        ops += [squeeze_op(rng.uniform(-2, 2)) for _ in range(50)]
        for op in ops:
            omega = symplectic_form(op.n_modes)
            np.testing.assert_allclose(op.matrix @ omega @ op.matrix.T, omega, atol=1e-12)
            assert np.linalg.det(op.matrix) == pytest.approx(1.0, abs=1e-12)

    def test_rejects_non_symplectic(self):
        with pytest.raises(InvalidParameterError, match="not symplectic"):
            SymplecticOp(np.diag([2.0, 2.0]), "bogus")

    def test_apply_requires_matching_modes(self):
        with pytest.raises(InvalidParameterError):
            apply_symplectic(vacuum(2), squeeze_op(0.1))


class TestPhysicality:
    def test_random_pipelines_stay_physical(self):
        rng = np.random.default_rng(23)
        for _ in range(150):
            state = random_state(rng, n_modes=2)
            state = apply_loss(state, rng.uniform(0.05, 1.0, 2))
            state = phase_rotation(state, rng.uniform(0, 2 * math.pi), mode=1)
            assert symplectic_eigenvalues(state.cov).min() >= 1.0 - 1e-9

    def test_loss_model_equivalence(self):
        # closed form eta*(e^{2r}cos^2 + e^{-2r}sin^2) + 1 - eta
        rng = np.random.default_rng(29)
        for _ in range(200):
            r = rng.uniform(0.0, 3.0)
            eta = rng.uniform(0.0, 1.0)
            theta = rng.uniform(0.0, 2.0 * math.pi)
            pipeline = quadrature_variance(apply_loss(squeezed_vacuum(r), eta), theta)
            closed = (eta * (math.exp(2 * r) * math.cos(theta) ** 2
                             + math.exp(-2 * r) * math.sin(theta) ** 2) + 1.0 - eta)
            assert pipeline == pytest.approx(closed, abs=1e-12, rel=1e-12)
