import math

import pytest
from hypothesis import given, settings, strategies as st

from omsteady.errors import InvalidParams
from omsteady.models import (
    BrightDark,
    SystemParams1D,
    SystemParams2D,
    SystemParamsRWA,
    bright_dark,
    cooperativity,
    g_o_squared,
    planck,
    resonant_2d_design,
    temperature_for_occupation,
)


class TestSystemParams1D:
    def test_coupling_filled_from_rate(self):
        p = SystemParams1D(omega_b=1.0, gamma_b=0.0, kappa=0.2, delta=1.0, G_o=0.4)
        assert p.lambda_o == pytest.approx(0.4 / math.sqrt(0.5), rel=1e-15)

    def test_coupling_filled_from_gradient(self):
        lam = 0.4 / math.sqrt(0.5)
        p = SystemParams1D(omega_b=1.0, gamma_b=0.0, kappa=0.2, delta=1.0,
                           lambda_o=lam)
        assert p.G_o == pytest.approx(0.4, rel=1e-15)

    def test_inconsistent_pair_rejected(self):
        with pytest.raises(InvalidParams):
            SystemParams1D(omega_b=1.0, gamma_b=0.0, kappa=0.2, delta=1.0,
                           lambda_o=1.0, G_o=0.4)

    def test_consistent_pair_accepted(self):
        lam = 0.4 / math.sqrt(0.5)
        p = SystemParams1D(omega_b=1.0, gamma_b=0.0, kappa=0.2, delta=1.0,
                           lambda_o=lam, G_o=0.4)
        assert p.G_o == 0.4

    def test_missing_coupling_rejected(self):
        with pytest.raises(InvalidParams):
            SystemParams1D(omega_b=1.0, gamma_b=0.0, kappa=0.2, delta=1.0)

    @pytest.mark.parametrize("field,value", [
        ("omega_b", 0.0), ("omega_b", -1.0), ("gamma_b", -1e-9),
        ("kappa", 0.0), ("mass", 0.0), ("temperature", -0.1), ("hbar", 0.0),
    ])
    def test_domain_violations(self, field, value):
        kwargs = dict(omega_b=1.0, gamma_b=0.0, kappa=0.2, delta=1.0, G_o=0.1)
        kwargs[field] = value
        with pytest.raises(InvalidParams):
            SystemParams1D(**kwargs)

    def test_with_coupling_rate(self):
        p = SystemParams1D(omega_b=1.0, gamma_b=0.0, kappa=0.2, delta=1.0, G_o=0.1)
        q = p.with_coupling_rate(0.3)
        assert q.G_o == 0.3
        assert q.lambda_o == pytest.approx(0.3 / math.sqrt(0.5), rel=1e-15)
        assert q.kappa == p.kappa

    def test_nonunit_mass_conversion(self):
        p = SystemParams1D(omega_b=2.0, gamma_b=0.0, kappa=0.2, delta=1.0,
                           G_o=0.1, mass=3.0, hbar=0.5)
        conv = math.sqrt(0.5 / (2.0 * 3.0 * 2.0))
        assert p.lambda_o == pytest.approx(0.1 / conv, rel=1e-15)


class TestBrightDark:
    def test_quarter_rotation_example(self):
        p = SystemParams2D(omega_x=1.1, omega_y=0.9, gamma_x=0.0, gamma_y=0.0,
                           phi=math.pi / 4, kappa=0.2, delta=1.0, lambda_o=0.1)
        bd = bright_dark(p)
        assert bd.omega_b == pytest.approx(math.sqrt(1.01), rel=1e-15)
        assert bd.omega_d == pytest.approx(math.sqrt(1.01), rel=1e-15)
        assert bd.delta_m == pytest.approx(0.2, rel=1e-15)
        assert bd.omega_bar_m == pytest.approx(1.0, rel=1e-15)
        assert bd.G_m == pytest.approx(0.0995, abs=5e-5)

    def test_axis_aligned_has_no_mixing(self):
        p = SystemParams2D(omega_x=1.1, omega_y=0.9, gamma_x=1e-3, gamma_y=1e-4,
                           phi=0.0, kappa=0.2, delta=1.0, lambda_o=0.1)
        bd = bright_dark(p)
        assert bd.delta_m == 0.0
        assert bd.eta_m == 0.0
        assert bd.omega_b == pytest.approx(1.1)
        assert bd.gamma_b == pytest.approx(1e-3)

    @given(
        wx=st.floats(0.2, 3.0), wy=st.floats(0.2, 3.0),
        gx=st.floats(0.0, 0.1), gy=st.floats(0.0, 0.1),
        phi=st.floats(0.0, math.pi / 2),
    )
    @settings(max_examples=200, deadline=None)
    def test_rotation_traces_preserved(self, wx, wy, gx, gy, phi):
        p = SystemParams2D(omega_x=wx, omega_y=wy, gamma_x=gx, gamma_y=gy,
                           phi=phi, kappa=0.2, delta=1.0, lambda_o=0.1)
        bd = bright_dark(p)
        assert bd.omega_b**2 + bd.omega_d**2 == pytest.approx(
            wx**2 + wy**2, rel=1e-12)
        assert bd.gamma_b + bd.gamma_d == pytest.approx(gx + gy, rel=1e-12, abs=1e-15)

    @given(
        wx=st.floats(0.2, 3.0), wy=st.floats(0.2, 3.0),
        gx=st.floats(0.0, 0.1), gy=st.floats(0.0, 0.1),
        phi=st.floats(1e-3, math.pi / 2 - 1e-3),
    )
    @settings(max_examples=200, deadline=None)
    def test_complementary_angle_swaps_roles(self, wx, wy, gx, gy, phi):
        base = dict(omega_x=wx, omega_y=wy, gamma_x=gx, gamma_y=gy,
                    kappa=0.2, delta=1.0, lambda_o=0.1)
        a = bright_dark(SystemParams2D(phi=phi, **base))
        b = bright_dark(SystemParams2D(phi=math.pi / 2 - phi, **base))
        assert a.omega_b == pytest.approx(b.omega_d, rel=1e-12)
        assert a.omega_d == pytest.approx(b.omega_b, rel=1e-12)
        assert a.gamma_b == pytest.approx(b.gamma_d, rel=1e-12, abs=1e-15)
        assert a.delta_m == pytest.approx(b.delta_m, rel=1e-12)
        assert a.eta_m == pytest.approx(b.eta_m, rel=1e-12, abs=1e-15)


class TestPlanck:
    def test_matched_scale_occupation(self):
        # k_B T = hbar omega gives 1/(e - 1)
        assert planck(1.0, 1.0) == pytest.approx(0.5820, abs=5e-5)

    def test_zero_temperature(self):
        assert planck(1.0, 0.0) == 0.0

    def test_high_temperature_is_classical(self):
        assert planck(1.0, 1e6) == pytest.approx(1e6, rel=1e-5)

    def test_rejects_nonpositive_frequency(self):
        with pytest.raises(InvalidParams):
            planck(0.0, 1.0)

    @given(n=st.floats(1e-6, 1e8), w=st.floats(1e-3, 1e3))
    @settings(max_examples=200, deadline=None)
    def test_temperature_roundtrip(self, n, w):
        t = temperature_for_occupation(n, w)
        assert planck(w, t) == pytest.approx(n, rel=1e-12)

    def test_temperature_for_zero_occupation(self):
        assert temperature_for_occupation(0.0, 1.0) == 0.0


class TestDerivedScales:
    def test_g_o_squared_reference_value(self):
        p = SystemParams1D(omega_b=1.0, gamma_b=0.0, kappa=0.2, delta=1.0, G_o=0.4)
        assert g_o_squared(p) == pytest.approx(2 * 0.16 / 1.01, rel=1e-15)

    def test_cooperativity(self):
        p = SystemParamsRWA(omega_b=1.0, omega_d=1.0, gamma_b=1e-6, gamma_d=1e-6,
                            kappa=1e-3, delta=1.0, G_o=2e-3, G_m=1e-3)
        assert cooperativity(p) == pytest.approx(4 * 4e-6 / (1e-3 * 2e-6), rel=1e-12)

    def test_resonant_design_hits_target(self):
        p = resonant_2d_design(omega=1.0, G_o=0.2, G_m=0.1, kappa=0.2)
        bd = bright_dark(p)
        assert bd.omega_b == pytest.approx(1.0, rel=1e-12)
        assert bd.omega_d == pytest.approx(1.0, rel=1e-12)
        assert bd.G_m == pytest.approx(0.1, rel=1e-12)
        assert p.G_o == pytest.approx(0.2, rel=1e-12)
        assert p.delta == 1.0

    def test_resonant_design_rejects_overstrong_mixing(self):
        with pytest.raises(InvalidParams):
            resonant_2d_design(omega=1.0, G_o=0.1, G_m=0.51, kappa=0.2)

    def test_bright_dark_record_fields(self):
        bd = BrightDark(omega_b=1.0, omega_d=1.0, gamma_b=0.0, gamma_d=0.0,
                        delta_m=0.1, eta_m=0.0, omega_bar_m=1.0, G_m=0.05)
        assert bd.delta_m == 0.1
