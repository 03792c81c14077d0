import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eitfluct.errors import DomainError
from eitfluct.medium import (CoherentNoise, FieldConfig, InputNoise,
                             MediumParams, SqueezedNoise, TabulatedNoise,
                             coupling_constant, load_params, rabi_frequencies,
                             squeezed_preset, write_params)


class TestMediumParams:
    def test_gamma_is_sum_of_partial_rates(self):
        m = MediumParams(gamma1=0.3, gamma2=0.7, g1=0.1, g2=0.1)
        assert m.gamma == 1.0

    @pytest.mark.parametrize("kw", [
        dict(gamma1=-0.1), dict(gamma2=-1.0), dict(gamma12=-1e-9),
        dict(g1=-0.1), dict(atom_number=0.5), dict(medium_length=0.0),
        dict(light_speed=-1.0),
    ])
    def test_domain_validation(self, kw):
        base = dict(gamma1=0.5, gamma2=0.5, g1=0.1, g2=0.1)
        base.update(kw)
        with pytest.raises(DomainError):
            MediumParams(**base)

    def test_immutable(self, medium):
        with pytest.raises(AttributeError):
            medium.gamma1 = 2.0


class TestFieldConfig:
    def test_two_photon_resonant_flag(self):
        assert FieldConfig(delta1=0.3, delta2=0.3).two_photon_resonant
        assert not FieldConfig(delta1=0.3, delta2=0.2).two_photon_resonant

    def test_from_rabi(self, medium):
        f = FieldConfig.from_rabi(medium, 1.0, 0.6)
        o1, o2, o = rabi_frequencies(medium, f)
        assert o1 == pytest.approx(1.0)
        assert o2 == pytest.approx(0.6)
        assert o == pytest.approx(math.hypot(1.0, 0.6))

    def test_negative_amplitude_rejected(self):
        with pytest.raises(DomainError):
            FieldConfig(alpha1=-1.0)


class TestCouplingConstant:
    def test_symmetric_collapse(self):
        # g1 = g2 = g with Omega1 = Omega2 collapses to N g^2 / c
        m = MediumParams(gamma1=0.5, gamma2=0.5, g1=0.2, g2=0.2,
                         atom_number=50.0, light_speed=2.0)
        f = FieldConfig(alpha1=3.0, alpha2=3.0)
        assert coupling_constant(m, f) == pytest.approx(50.0 * 0.04 / 2.0)

    def test_single_field_limit(self):
        # Omega2 = 0 leaves N g2^2 / c
        m = MediumParams(gamma1=0.5, gamma2=0.5, g1=0.3, g2=0.2,
                         atom_number=7.0, light_speed=1.0)
        f = FieldConfig(alpha1=5.0, alpha2=0.0)
        assert coupling_constant(m, f) == pytest.approx(7.0 * 0.04)

    def test_doppler_figure_parameter_set(self):
        # gamma = 1, g1 = g2 = gamma/10, N = 1e12, Omega1 = Omega2 = 1
        m = MediumParams(gamma1=0.5, gamma2=0.5, g1=0.1, g2=0.1,
                         atom_number=1e12, light_speed=1.0)
        f = FieldConfig(alpha1=10.0, alpha2=10.0)
        assert coupling_constant(m, f) == pytest.approx(1e12 * 0.01 / 1.0)

    def test_no_driving_field(self, medium):
        with pytest.raises(DomainError, match="no driving field"):
            coupling_constant(medium, FieldConfig())

    @given(scale=st.floats(0.1, 10.0))
    @settings(max_examples=25, deadline=None)
    def test_scaling_under_coupling_amplitude_rescaling(self, scale):
        # g_j -> s g_j with alpha_j -> alpha_j / s keeps every Omega_j
        # fixed while the coupling constant picks up s^2 (it carries one
        # g^2 beyond the Rabi frequencies, as the single-field limit
        # N g2^2 / c already shows).
        m1 = MediumParams(gamma1=0.5, gamma2=0.5, g1=0.1, g2=0.07)
        f1 = FieldConfig(alpha1=2.0, alpha2=3.0)
        m2 = MediumParams(gamma1=0.5, gamma2=0.5, g1=0.1 * scale, g2=0.07 * scale)
        f2 = FieldConfig(alpha1=2.0 / scale, alpha2=3.0 / scale)
        assert rabi_frequencies(m2, f2) == pytest.approx(
            rabi_frequencies(m1, f1), rel=1e-12)
        assert coupling_constant(m2, f2) == pytest.approx(
            scale ** 2 * coupling_constant(m1, f1), rel=1e-12)


class TestSqueezedPreset:
    def test_zero_squeezing_is_coherent(self):
        assert squeezed_preset(0.0) == (0.0, 0.0)

    def test_unit_squeezing_axis_values(self):
        # Oracle: the squeezed-input spectrum evaluated directly,
        # exp(-2 xi) cos^2(theta) + exp(2 xi) sin^2(theta), at xi = 1.
        f, g = squeezed_preset(1.0)
        s_min = 1.0 + 2.0 * g * math.cos(0.0) + 2.0 * f
        s_max = 1.0 + 2.0 * g * math.cos(math.pi) + 2.0 * f
        assert s_min == pytest.approx(math.exp(-2.0), rel=1e-12)
        assert s_max == pytest.approx(math.exp(2.0), rel=1e-12)

    @given(xi=st.floats(-3.0, 3.0))
    @settings(max_examples=50, deadline=None)
    def test_minimum_uncertainty(self, xi):
        # S(theta) S(theta + pi/2) >= 1, equality at the principal axes.
        f, g = squeezed_preset(xi)
        theta = np.linspace(0.0, np.pi, 181)
        s = 1.0 + 2.0 * g * np.cos(2 * theta) + 2.0 * f
        s_quarter = 1.0 + 2.0 * g * np.cos(2 * (theta + np.pi / 2)) + 2.0 * f
        prod = s * s_quarter
        assert prod.min() >= 1.0 - 1e-9
        assert prod.min() == pytest.approx(1.0, abs=1e-9)


class TestInputNoise:
    def test_coherent_preset_identically_zero(self):
        n = CoherentNoise()
        w = np.linspace(-3, 3, 11)
        assert np.all(n.f(w) == 0.0)
        assert np.all(n.g(w) == 0.0)

    def test_initial_spectrum_physical_for_presets(self):
        w = np.linspace(-3.0, 3.0, 31)
        th = np.linspace(0.0, np.pi, 16, endpoint=False)
        for model in (CoherentNoise(), SqueezedNoise(0.7), SqueezedNoise(2.0)):
            noise = InputNoise(probe=model)
            vals = noise.initial_spectrum(2, w[:, None], th[None, :])
            assert vals.min() >= -1e-12

    def test_tabulated_symmetrized_and_clamped(self):
        grid = (-1.0, 0.0, 2.0)
        noise = TabulatedNoise(omega=grid, f_values=(0.4, 0.1, 0.6),
                               g_values=(0.0, 0.0, 0.0))
        # even: f(w) = f(-w) by construction
        w = np.linspace(-3.0, 3.0, 25)
        assert np.allclose(noise.f(w), noise.f(-w))
        # clamped beyond the grid, no extrapolation
        assert noise.f(10.0) == pytest.approx(noise.f(3.0))

    def test_tabulated_unphysical_rejected(self):
        with pytest.raises(DomainError, match="physical"):
            TabulatedNoise(omega=(0.0, 1.0), f_values=(0.0, 0.0),
                           g_values=(0.9, 0.9))

    def test_tabulated_grid_validation(self):
        with pytest.raises(DomainError):
            TabulatedNoise(omega=(1.0, 0.0), f_values=(0.0, 0.0),
                           g_values=(0.0, 0.0))


class TestParamFiles:
    def test_round_trip(self, tmp_path):
        m = MediumParams(gamma1=0.4, gamma2=0.6, gamma12=0.01, g1=0.1, g2=0.2,
                         atom_number=1e10, medium_length=2.0, light_speed=3.0)
        f = FieldConfig(delta1=0.5, delta2=0.5, alpha1=4.0, alpha2=2.0)
        noise = InputNoise(pump=CoherentNoise(), probe=SqueezedNoise(1.5))
        path = tmp_path / "params.txt"
        write_params(path, m, f, noise)
        m2, f2, n2 = load_params(path)
        assert m2 == m
        assert f2 == f
        assert isinstance(n2.probe, SqueezedNoise)
        assert n2.probe.xi == 1.5

    def test_unknown_key_named_in_error(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("gamma1 = 0.5\nbogus = 1\n")
        with pytest.raises(DomainError, match="bogus"):
            load_params(path)

    def test_comments_and_bad_number(self, tmp_path):
        path = tmp_path / "p.txt"
        path.write_text("# comment\ngamma1 = 0.5  # inline\n")
        m, _, _ = load_params(path)
        assert m.gamma1 == 0.5
        path.write_text("gamma1 = abc\n")
        with pytest.raises(DomainError, match="gamma1"):
            load_params(path)

    def test_bad_noise_kind(self, tmp_path):
        path = tmp_path / "p.txt"
        path.write_text("noise2 = thermal\n")
        with pytest.raises(DomainError, match="noise2"):
            load_params(path)
