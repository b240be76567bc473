import math

import numpy as np
import pytest
import scipy.linalg

from omsteady.errors import (
    CorrelatedBathUnsupported,
    InvalidParams,
    UnstableSystem,
)
from omsteady.gaussian import occupation_and_purity_1d, purity_2d_general
from omsteady.langevin import (
    LYAPUNOV_RESIDUAL_RTOL,
    LinearSystem,
    NoiseMode,
    build_1d,
    build_2d,
    build_rwa,
    stability,
    steady_covariance,
)
from omsteady.models import (
    SystemParams1D,
    SystemParams2D,
    SystemParamsRWA,
    resonant_2d_design,
    temperature_for_occupation,
)

P_1D = SystemParams1D(omega_b=1.0, gamma_b=0.0, kappa=0.2, delta=1.0, G_o=0.4)


class TestBuild1D:
    def test_drift_structure(self):
        sys = build_1d(P_1D, NoiseMode.VacuumOnly)
        A = sys.drift
        lam = P_1D.lambda_o
        assert sys.labels == ("x_b", "p_b", "X_c", "P_c")
        assert A[0, 1] == 1.0
        assert A[1, 0] == -1.0
        assert A[1, 2] == pytest.approx(-math.sqrt(2.0) * lam)
        assert A[2, 3] == 1.0
        assert A[3, 2] == -1.0
        assert A[3, 0] == pytest.approx(-math.sqrt(2.0) * lam)
        # position feels no direct optical force, phase feels no position
        assert A[0, 2] == A[0, 3] == A[2, 0] == A[2, 1] == 0.0

    def test_vacuum_diffusion(self):
        sys = build_1d(P_1D, NoiseMode.VacuumOnly)
        expect = np.zeros((4, 4))
        expect[2, 2] = expect[3, 3] = 0.1
        np.testing.assert_array_equal(sys.diffusion, expect)

    def test_thermal_diffusion_strength(self):
        n_B = 2.0
        p = SystemParams1D(
            omega_b=1.0, gamma_b=1e-3, kappa=0.2, delta=1.0, G_o=0.4,
            temperature=temperature_for_occupation(n_B, 1.0))
        sys = build_1d(p, NoiseMode.MarkovianThermal)
        assert sys.diffusion[1, 1] == pytest.approx(2e-3 * (n_B + 0.5), rel=1e-12)

    def test_thermal_mode_without_damping_adds_nothing(self):
        sys = build_1d(P_1D, NoiseMode.MarkovianThermal)
        assert sys.diffusion[1, 1] == 0.0

    def test_mass_scaling(self):
        p = SystemParams1D(omega_b=2.0, gamma_b=0.0, kappa=0.2, delta=1.0,
                           G_o=0.1, mass=3.0)
        A = build_1d(p, NoiseMode.VacuumOnly).drift
        assert A[0, 1] == pytest.approx(1.0 / 3.0)
        assert A[1, 0] == pytest.approx(-12.0)


class TestStability:
    def test_below_threshold_stable(self):
        assert stability(build_1d(P_1D, NoiseMode.VacuumOnly))

    def test_above_threshold_unstable(self):
        p = P_1D.with_coupling_rate(0.55)
        assert not stability(build_1d(p, NoiseMode.VacuumOnly))

    def test_marginal_rotation_classed_unstable(self):
        # an undamped oscillator only rotates; its covariance never settles
        sys = LinearSystem(
            drift=np.array([[0.0, 1.0], [-1.0, 0.0]]),
            diffusion=np.zeros((2, 2)),
            labels=("x", "p"),
        )
        assert not stability(sys)
        with pytest.raises(UnstableSystem):
            steady_covariance(sys)

    def test_threshold_location(self):
        # stability is lost where omega_b^2 = 2 g_o^2
        k = (P_1D.kappa / 2.0) ** 2 + P_1D.delta**2
        g_crit = math.sqrt(k / (4.0 * P_1D.delta))
        assert stability(build_1d(P_1D.with_coupling_rate(g_crit * (1 - 1e-6)),
                                  NoiseMode.VacuumOnly))
        assert not stability(build_1d(P_1D.with_coupling_rate(g_crit * (1 + 1e-6)),
                                      NoiseMode.VacuumOnly))


class TestSteadyCovariance:
    def test_matches_scipy_lyapunov(self):
        sys = build_1d(P_1D, NoiseMode.VacuumOnly)
        v_own = steady_covariance(sys).matrix
        v_ref = scipy.linalg.solve_continuous_lyapunov(sys.drift, -sys.diffusion)
        np.testing.assert_allclose(v_own, v_ref, rtol=1e-9, atol=1e-14)

    def test_matches_scipy_lyapunov_6x6(self):
        p = resonant_2d_design(omega=1.0, G_o=0.2, G_m=0.1, kappa=0.2)
        sys = build_2d(p, NoiseMode.VacuumOnly)
        v_own = steady_covariance(sys).matrix
        v_ref = scipy.linalg.solve_continuous_lyapunov(sys.drift, -sys.diffusion)
        np.testing.assert_allclose(v_own, v_ref, rtol=1e-9, atol=1e-14)

    def test_residual_bound_holds(self):
        sys = build_1d(P_1D, NoiseMode.VacuumOnly)
        V = steady_covariance(sys).matrix
        resid = np.abs(sys.drift @ V + V @ sys.drift.T + sys.diffusion).max()
        assert resid <= LYAPUNOV_RESIDUAL_RTOL * np.abs(sys.diffusion).max()

    def test_deterministic_bit_for_bit(self):
        sys = build_1d(P_1D, NoiseMode.VacuumOnly)
        a = steady_covariance(sys).matrix
        b = steady_covariance(sys).matrix
        assert np.array_equal(a, b)

    def test_unstable_raises(self):
        sys = build_1d(P_1D.with_coupling_rate(0.55), NoiseMode.VacuumOnly)
        with pytest.raises(UnstableSystem):
            steady_covariance(sys)

    def test_thermal_occupation_recovered_at_weak_coupling(self):
        n_B = 2.0
        p = SystemParams1D(
            omega_b=1.0, gamma_b=1e-3, kappa=0.2, delta=1.0, G_o=1e-8,
            temperature=temperature_for_occupation(n_B, 1.0))
        cov = steady_covariance(build_1d(p, NoiseMode.MarkovianThermal))
        n_bar, _ = occupation_and_purity_1d(cov.mechanical_1d())
        assert n_bar == pytest.approx(n_B, rel=1e-6)
        assert cov.mechanical_1d().xx == pytest.approx(2.5, rel=1e-6)

    def test_mechanical_block_extraction(self):
        cov = steady_covariance(build_1d(P_1D, NoiseMode.VacuumOnly))
        c1 = cov.mechanical_1d()
        assert c1.xx == cov.matrix[0, 0]
        assert c1.pp == cov.matrix[1, 1]
        assert c1.xp == cov.matrix[0, 1]


class TestBuild2D:
    P = resonant_2d_design(omega=1.0, G_o=0.2, G_m=0.1, kappa=0.2)

    def test_labels_and_coupling_structure(self):
        sys = build_2d(self.P, NoiseMode.VacuumOnly)
        A = sys.drift
        assert sys.labels == ("x_b", "p_b", "x_d", "p_d", "X_c", "P_c")
        # only the bright mode drives (and is driven by) the cavity
        assert A[5, 0] == pytest.approx(-math.sqrt(2.0) * self.P.lambda_o)
        assert A[5, 2] == 0.0
        assert A[3, 4] == 0.0
        # elastic bright/dark cross coupling is symmetric
        assert A[1, 2] == A[3, 0]
        assert A[1, 2] != 0.0

    def test_correlated_bath_rejected(self):
        p = SystemParams2D(omega_x=1.1, omega_y=0.9, gamma_x=1e-3, gamma_y=1e-4,
                           phi=math.pi / 4, kappa=0.2, delta=1.0, lambda_o=0.1,
                           temperature=1.0)
        with pytest.raises(CorrelatedBathUnsupported):
            build_2d(p, NoiseMode.MarkovianThermal)
        # vacuum-only never touches the bath correlation question
        build_2d(p, NoiseMode.VacuumOnly)

    def test_equal_damping_thermal_ok(self):
        p = SystemParams2D(omega_x=1.1, omega_y=0.9, gamma_x=1e-3, gamma_y=1e-3,
                           phi=math.pi / 4, kappa=0.2, delta=1.0, lambda_o=0.1,
                           temperature=1.0)
        sys = build_2d(p, NoiseMode.MarkovianThermal)
        assert sys.diffusion[1, 1] > 0.0
        assert sys.diffusion[3, 3] > 0.0

    def test_axis_aligned_thermal_ok_with_unequal_damping(self):
        # no mixing at phi = 0, so distinct baths stay uncorrelated
        p = SystemParams2D(omega_x=1.1, omega_y=0.9, gamma_x=1e-3, gamma_y=1e-4,
                           phi=0.0, kappa=0.2, delta=1.0, lambda_o=0.1,
                           temperature=1.0)
        sys = build_2d(p, NoiseMode.MarkovianThermal)
        assert sys.diffusion[1, 1] > sys.diffusion[3, 3] > 0.0

    def test_steady_state_block_structure(self):
        cov = steady_covariance(build_2d(self.P, NoiseMode.VacuumOnly))
        m = cov.mechanical_2d().matrix
        # position-position and momentum-momentum correlations survive,
        # same-mode cross moments vanish at steady state
        assert abs(m[0, 1]) < 1e-12 * m[0, 0]
        assert abs(m[2, 3]) < 1e-12 * m[2, 2]
        assert m[0, 2] != 0.0
        summary = purity_2d_general(cov.mechanical_2d())
        assert 0.0 < summary.purity_2d <= 1.0


class TestBuildRWA:
    P = SystemParamsRWA(omega_b=1.0, omega_d=1.0, gamma_b=1e-6, gamma_d=1e-6,
                        kappa=1e-3, delta=1.0, G_o=2e-3, G_m=2e-3 / math.sqrt(2.0),
                        n_B_b=25.0, n_B_d=25.0)

    def test_in_regime_no_warning(self):
        assert build_rwa(self.P).warnings == ()

    def test_out_of_regime_warns(self):
        import dataclasses
        p = dataclasses.replace(self.P, kappa=0.2)
        sys = build_rwa(p)
        assert len(sys.warnings) == 1
        assert "regime" in sys.warnings[0]

    def test_decoupled_modes_thermalize(self):
        import dataclasses
        p = dataclasses.replace(self.P, G_o=0.0, G_m=0.0)
        cov = steady_covariance(build_rwa(p))
        v = cov.matrix
        # each quadrature pair settles at n_B + 1/2; cavity at vacuum
        assert v[0, 0] == pytest.approx(0.5, rel=1e-9)
        assert v[2, 2] == pytest.approx(25.5, rel=1e-9)
        assert v[4, 4] == pytest.approx(25.5, rel=1e-9)

    def test_beamsplitter_antisymmetry(self):
        A = build_rwa(self.P).drift
        # exchange coupling blocks are antisymmetric between quadratures
        assert A[0, 3] == pytest.approx(self.P.G_o)
        assert A[1, 2] == pytest.approx(-self.P.G_o)
        assert A[2, 5] == pytest.approx(self.P.G_m)
        assert A[3, 4] == pytest.approx(-self.P.G_m)
        # no direct cavity-dark coupling
        assert A[0, 5] == A[1, 4] == 0.0

    def test_mechanical_block_uses_amplitude_labels(self):
        cov = steady_covariance(build_rwa(self.P))
        c2 = cov.mechanical_2d()
        assert c2.matrix.shape == (4, 4)
        assert c2.hbar == 1.0


class TestLinearSystemValidation:
    def test_shape_mismatch(self):
        with pytest.raises(InvalidParams):
            LinearSystem(drift=np.zeros((3, 2)), diffusion=np.zeros((3, 3)),
                         labels=("a", "b", "c"))

    def test_odd_dimension(self):
        with pytest.raises(InvalidParams):
            LinearSystem(drift=-np.eye(3), diffusion=np.eye(3),
                         labels=("a", "b", "c"))

    def test_asymmetric_diffusion(self):
        d = np.eye(2)
        d[0, 1] = 0.5
        with pytest.raises(InvalidParams):
            LinearSystem(drift=-np.eye(2), diffusion=d, labels=("x", "p"))
