import math

import numpy as np
import pytest

from mircomb.errors import NumericsError, PhysicsError
from mircomb.propagation import (
    FiberParams,
    StepControl,
    phenomenological_continuum,
    propagate,
    simulate_supercontinuum,
)
from mircomb.pulse import TimeGrid, gaussian_pulse, sech_pulse, to_spectrum
from mircomb.spectral import fwhm, total_power, wavelength_to_wavenumber

GRID = TimeGrid(8192, 2.5e-15)


def rms_rel(a, b):
    return float(np.sqrt(np.mean(np.abs(a - b) ** 2) / np.mean(np.abs(b) ** 2)))


class TestLinearLimits:
    def test_identity_evolution(self):
        e = gaussian_pulse(100e-15, 1e3, 1.55, GRID)
        fiber = FiberParams(length=1.0, beta2=0.0, beta3=0.0, gamma=0.0, alpha=0.0)
        out = propagate(e, fiber, StepControl(dz=0.05))
        assert rms_rel(out.samples, e.samples) < 1e-12

    def test_pure_gvd_gaussian_broadening(self):
        # T(z) = T0 sqrt(1 + (z / L_D)^2) with L_D = T0^2 / |beta2|
        t_fwhm = 100e-15
        t0 = t_fwhm / (2 * math.sqrt(math.log(2)))
        beta2 = -2.0e-26
        ld = t0**2 / abs(beta2)
        e = gaussian_pulse(t_fwhm, 1e3, 1.55, GRID)
        from mircomb.pulse import duration_fwhm
        for z_over_ld in (0.5, 1.0, 2.0):
            fiber = FiberParams(length=z_over_ld * ld, beta2=beta2, gamma=0.0)
            out = propagate(e, fiber, StepControl(dz=ld / 50))
            expected = t_fwhm * math.sqrt(1 + z_over_ld**2)
            assert duration_fwhm(out) == pytest.approx(expected, rel=1e-3)

    def test_loss_only_decay(self):
        e = gaussian_pulse(100e-15, 1e3, 1.55, GRID)
        alpha, length = 2.3, 0.8
        fiber = FiberParams(length=length, beta2=0.0, gamma=0.0, alpha=alpha)
        out = propagate(e, fiber, StepControl(dz=0.01))
        assert out.energy() == pytest.approx(e.energy() * math.exp(-alpha * length),
                                             rel=1e-9)


class TestSoliton:
    def test_fundamental_soliton_shape_invariance(self):
        t0 = 60e-15
        beta2 = -2.0e-26
        gamma = 0.01
        p0 = abs(beta2) / (gamma * t0**2)
        period = math.pi / 2 * t0**2 / abs(beta2)
        e = sech_pulse(t0, p0, 1.55, GRID)
        fiber = FiberParams(length=period, beta2=beta2, gamma=gamma)
        ctl = StepControl(dz=period / 200, max_nonlinear_phase_per_step=0.01)
        out = propagate(e, fiber, ctl)
        assert rms_rel(out.power(), e.power()) < 1e-3

    def test_energy_conservation_lossless(self):
        t0 = 60e-15
        beta2 = -2.0e-26
        gamma = 0.01
        p0 = 4 * abs(beta2) / (gamma * t0**2)  # N = 2, strongly nonlinear
        e = sech_pulse(t0, p0, 1.55, GRID)
        ld = t0**2 / abs(beta2)
        fiber = FiberParams(length=ld, beta2=beta2, gamma=gamma)
        ctl = StepControl(dz=ld / 1000, max_nonlinear_phase_per_step=0.1)
        out = propagate(e, fiber, ctl)
        assert out.energy() == pytest.approx(e.energy(), rel=1e-6)


class TestConvergence:
    def test_second_order_in_dz(self):
        t0 = 60e-15
        beta2 = -2.0e-26
        gamma = 0.01
        p0 = 2 * abs(beta2) / (gamma * t0**2)
        e = sech_pulse(t0, p0, 1.55, GRID)
        ld = t0**2 / abs(beta2)
        fiber = FiberParams(length=0.3 * ld, beta2=beta2, gamma=gamma)

        def run(dz):
            return propagate(e, fiber,
                             StepControl(dz=dz, max_nonlinear_phase_per_step=0.1))

        dz0 = 0.3 * ld / 40
        a = run(dz0).samples
        b = run(dz0 / 2).samples
        c = run(dz0 / 4).samples
        change1 = np.sqrt(np.mean(np.abs(b - a) ** 2))
        change2 = np.sqrt(np.mean(np.abs(c - b) ** 2))
        assert change2 < change1 / 3.3  # observed order >= 2

    def test_bit_reproducible(self):
        e = sech_pulse(60e-15, 2e4, 1.55, GRID)
        fiber = FiberParams(length=0.02, beta2=-2e-26, beta3=1e-40, gamma=0.005,
                            raman_fraction=0.18, self_steepening=True)
        ctl = StepControl(dz=2e-5)
        out1 = propagate(e, fiber, ctl)
        out2 = propagate(e, fiber, ctl)
        np.testing.assert_array_equal(out1.samples, out2.samples)


class TestGuards:
    def test_aliasing_abort(self):
        # a hard-driven pulse on a too-small grid must abort, not wrap
        grid = TimeGrid(512, 20e-15)
        e = sech_pulse(150e-15, 2e5, 1.55, grid)
        fiber = FiberParams(length=0.5, beta2=-2e-26, gamma=0.05,
                            raman_fraction=0.18, self_steepening=True)
        with pytest.raises(NumericsError):
            propagate(e, fiber, StepControl(dz=1e-3))

    def test_step_cap(self):
        e = sech_pulse(60e-15, 3e4, 1.55, GRID)
        fiber = FiberParams(length=1.0, beta2=-2e-26, gamma=0.01)
        with pytest.raises(NumericsError):
            propagate(e, fiber, StepControl(dz=1e-5, hard_step_cap=10))


class TestSupercontinuum:
    def test_linear_fiber_preserves_spectrum(self):
        e = sech_pulse(60e-15, 3e4, 1.55, GRID)
        fiber = FiberParams(length=0.1, beta2=-2e-26, gamma=0.0)
        s_out = simulate_supercontinuum(e, fiber, 0.0)
        s_in = to_spectrum(e, 160.0, 4e7)
        sel = s_in.density > 1e-9 * s_in.density.max()
        np.testing.assert_allclose(s_out.density[sel], s_in.density[sel], rtol=1e-6)

    def test_red_shifted_band(self, default_fiber, sc_seed, sc_step_control):
        s = simulate_supercontinuum(sc_seed, default_fiber, 0.0, ctl=sc_step_control)
        nu = s.wavenumbers()
        red = nu < wavelength_to_wavenumber(1.65)
        frac = np.trapezoid(np.where(red, s.density, 0.0), dx=s.grid.step) / total_power(s)
        assert frac >= 0.30

    def test_chirp_tunes_red_centroid_monotonically(self, default_fiber, sc_seed,
                                                    gdd_table, sc_step_control):
        centroids = []
        for gdd in gdd_table[:4]:
            s = simulate_supercontinuum(sc_seed, default_fiber, gdd,
                                        ctl=sc_step_control)
            nu = s.wavenumbers()
            red = nu < wavelength_to_wavenumber(1.65)
            w = np.where(red, s.density, 0.0)
            centroids.append(float(np.sum(nu * w) / np.sum(w)))
        diffs = np.diff(centroids)
        assert np.all(diffs > 0) or np.all(diffs < 0)


class TestPhenomenological:
    def test_constructor_contract(self):
        s = phenomenological_continuum(2.0, 600.0, 160.0)
        assert total_power(s) == pytest.approx(160e3, rel=1e-3)
        assert fwhm(s) == pytest.approx(600.0, abs=s.grid.step)

    def test_peak_positions(self):
        assert phenomenological_continuum(1.7, 500.0, 160.0).peak_wavenumber() \
            == pytest.approx(5882.4, abs=10)
        assert phenomenological_continuum(2.3, 500.0, 160.0).peak_wavenumber() \
            == pytest.approx(4347.8, abs=10)

    def test_out_of_range_center(self):
        with pytest.raises(PhysicsError):
            phenomenological_continuum(1.5, 500.0, 160.0)
        with pytest.raises(PhysicsError):
            phenomenological_continuum(2.5, 500.0, 160.0)
