import math

import numpy as np
import pytest

from mircomb.errors import PhysicsError
from mircomb.spectral import (
    Band,
    C_CM_PER_S,
    PowerSpectrum,
    SpectralGrid,
    band_power,
    fwhm,
    is_octave,
    read_spectrum_csv,
    total_power,
    usable_width,
    wavelength_to_wavenumber,
    wavenumber_to_frequency,
    write_spectrum_csv,
)


def gaussian_spectrum(center=1500.0, sigma=100.0, peak=1.0, start=900.0,
                      step=1.0, count=1201):
    grid = SpectralGrid(start, step, count)
    nu = grid.wavenumbers()
    return PowerSpectrum(grid, peak * np.exp(-0.5 * ((nu - center) / sigma) ** 2))


class TestUnits:
    def test_one_wavenumber_is_c(self):
        assert wavenumber_to_frequency(1.0) == 2.99792458e10

    def test_linearity(self):
        assert wavenumber_to_frequency(1000.0) == 2.99792458e13

    def test_1550nm_frequency(self):
        # independent oracle: c / lambda with lambda = 1.55 um
        f = wavenumber_to_frequency(wavelength_to_wavenumber(1.55))
        assert f == pytest.approx(2.99792458e8 / 1.55e-6, rel=1e-12)
        assert f == pytest.approx(1.93414e14, rel=1e-5)

    def test_10um_round_number(self):
        assert wavelength_to_wavenumber(10.0) == 1000.0

    def test_quoted_range_endpoints(self):
        assert wavelength_to_wavenumber(4.0) == 2500.0
        # 17 um is 588.2 cm^-1: quoted ranges round this to 600
        assert wavelength_to_wavenumber(17.0) == pytest.approx(588.2, abs=0.05)

    def test_2p3um(self):
        assert wavelength_to_wavenumber(2.3) == pytest.approx(4347.83, abs=0.005)

    def test_rejects_nonpositive_wavelength(self):
        with pytest.raises(ValueError):
            wavelength_to_wavenumber(0.0)
        with pytest.raises(ValueError):
            wavelength_to_wavenumber(-1.5)

    def test_composition_matches_c_over_lambda(self):
        rng = np.random.default_rng(7)
        for lam in rng.uniform(0.2, 30.0, 200):
            f = wavenumber_to_frequency(wavelength_to_wavenumber(lam))
            assert f == pytest.approx(2.99792458e8 / (lam * 1e-6), rel=5e-16)


class TestGridAndTypes:
    def test_grid_invariants(self):
        with pytest.raises(ValueError):
            SpectralGrid(0.0, 1.0, 10)
        with pytest.raises(ValueError):
            SpectralGrid(100.0, -1.0, 10)
        with pytest.raises(ValueError):
            SpectralGrid(100.0, 1.0, 1)

    def test_density_validation(self):
        grid = SpectralGrid(100.0, 1.0, 5)
        with pytest.raises(ValueError):
            PowerSpectrum(grid, np.array([1.0, -0.1, 0, 0, 0]))
        with pytest.raises(ValueError):
            PowerSpectrum(grid, np.array([1.0, np.nan, 0, 0, 0]))
        with pytest.raises(ValueError):
            PowerSpectrum(grid, np.zeros(4))

    def test_density_is_readonly(self):
        s = gaussian_spectrum()
        with pytest.raises(ValueError):
            s.density[0] = 5.0

    def test_band_invariants(self):
        with pytest.raises(ValueError):
            Band(10.0, 5.0)
        with pytest.raises(ValueError):
            Band(-1.0, 5.0)
        assert Band(5.0, 5.0).width == 0.0  # degenerate limit allowed


class TestFwhm:
    def test_gaussian_sigma_100(self):
        s = gaussian_spectrum(sigma=100.0)
        expected = 2.0 * math.sqrt(2.0 * math.log(2.0)) * 100.0
        assert fwhm(s) == pytest.approx(expected, abs=s.grid.step)

    def test_single_bin_is_one_step(self):
        grid = SpectralGrid(100.0, 2.0, 11)
        d = np.zeros(11)
        d[5] = 3.0
        assert fwhm(PowerSpectrum(grid, d)) == pytest.approx(2.0)

    def test_all_zero_raises(self):
        grid = SpectralGrid(100.0, 1.0, 8)
        with pytest.raises(PhysicsError):
            fwhm(PowerSpectrum(grid, np.zeros(8)))

    def test_boundary_peak_raises(self):
        grid = SpectralGrid(100.0, 1.0, 8)
        d = np.linspace(0.1, 1.0, 8)  # peak at the last grid point
        with pytest.raises(PhysicsError):
            fwhm(PowerSpectrum(grid, d))

    def test_scale_invariance(self):
        s = gaussian_spectrum()
        for k in (1e-6, 3.7, 1e9):
            assert fwhm(s.with_density(k * s.density)) == pytest.approx(fwhm(s))


class TestUsableWidth:
    def test_gaussian_ten_percent_width(self):
        s = gaussian_spectrum(sigma=127.0, start=300.0, count=2401)
        band = usable_width(s, 0.1)
        expected = 2.0 * 127.0 * math.sqrt(2.0 * math.log(10.0))
        assert band.width == pytest.approx(expected, abs=s.grid.step)

    def test_rectangle_width_independent_of_level(self):
        grid = SpectralGrid(100.0, 1.0, 101)
        d = np.zeros(101)
        d[30:71] = 2.0
        s = PowerSpectrum(grid, d)
        for level in (0.05, 0.1, 0.5, 0.9):
            band = usable_width(s, level)
            # edges interpolate within the single step on each side
            assert band.width == pytest.approx(40.0, abs=2.0)

    def test_half_level_matches_fwhm_for_unimodal(self):
        s = gaussian_spectrum(sigma=85.0)
        assert usable_width(s, 0.5).width == pytest.approx(fwhm(s), abs=s.grid.step)

    def test_contiguity_stops_at_dip(self):
        # two humps with a dip below 10%: usable stays on the peak's hump
        grid = SpectralGrid(100.0, 1.0, 201)
        nu = grid.wavenumbers()
        d = np.exp(-0.5 * ((nu - 150) / 8) ** 2) + 0.6 * np.exp(-0.5 * ((nu - 250) / 8) ** 2)
        band = usable_width(PowerSpectrum(grid, d), 0.1)
        assert band.hi < 200.0

    def test_scale_invariance(self):
        s = gaussian_spectrum(sigma=60.0)
        b1 = usable_width(s, 0.1)
        b2 = usable_width(s.with_density(123.0 * s.density), 0.1)
        assert b1.lo == pytest.approx(b2.lo)
        assert b1.hi == pytest.approx(b2.hi)

    def test_level_validation(self):
        s = gaussian_spectrum()
        with pytest.raises(ValueError):
            usable_width(s, 0.0)
        with pytest.raises(ValueError):
            usable_width(s, 1.0)


class TestTotalPower:
    def test_flat_rectangle(self):
        grid = SpectralGrid(800.0, 1.0, 701)
        s = PowerSpectrum(grid, np.ones(701))
        assert total_power(s) == pytest.approx(700.0)

    def test_all_zero(self):
        grid = SpectralGrid(800.0, 1.0, 10)
        assert total_power(PowerSpectrum(grid, np.zeros(10))) == 0.0

    def test_gaussian_area(self):
        # peak 1 uW/cm^-1, FWHM 300 -> peak * fwhm * sqrt(pi / (4 ln 2))
        sigma = 300.0 / (2.0 * math.sqrt(2.0 * math.log(2.0)))
        s = gaussian_spectrum(center=1500.0, sigma=sigma, start=100.0, count=2901)
        expected = 300.0 * math.sqrt(math.pi / (4.0 * math.log(2.0)))
        assert total_power(s) == pytest.approx(expected, rel=1e-2)

    def test_additive_and_linear(self):
        grid = SpectralGrid(100.0, 1.0, 301)
        nu = grid.wavenumbers()
        d1 = np.where(nu < 200, 1.0, 0.0)
        d2 = np.where(nu >= 250, 2.0, 0.0)
        s1, s2 = PowerSpectrum(grid, d1), PowerSpectrum(grid, d2)
        s12 = PowerSpectrum(grid, d1 + d2)
        assert total_power(s12) == pytest.approx(total_power(s1) + total_power(s2))
        assert total_power(PowerSpectrum(grid, 3 * d1)) == pytest.approx(3 * total_power(s1))

    def test_band_power_half_in(self):
        grid = SpectralGrid(100.0, 1.0, 201)
        s = PowerSpectrum(grid, np.ones(201))
        assert band_power(s, Band(150.0, 250.0)) == pytest.approx(100.0)


class TestIsOctave:
    def test_lower_end_of_tuning_range(self):
        assert is_octave(Band(700.0, 1400.0))

    def test_upper_band_is_not(self):
        assert not is_octave(Band(1800.0, 2500.0))

    def test_exact_boundary_counts(self):
        assert is_octave(Band(600.0, 1200.0))


class TestGridConvergence:
    def test_refinement_changes_little(self):
        coarse = gaussian_spectrum(sigma=90.0, step=4.0, count=301)
        fine = gaussian_spectrum(sigma=90.0, step=2.0, count=601)
        assert abs(fwhm(coarse) - fwhm(fine)) < 4.0
        assert abs(usable_width(coarse, 0.1).width - usable_width(fine, 0.1).width) < 4.0
        assert abs(total_power(coarse) - total_power(fine)) < 4.0


class TestCsvRoundTrip:
    def test_write_read_exact(self, tmp_path):
        s = gaussian_spectrum(sigma=42.5, count=257)
        path = tmp_path / "spec.csv"
        write_spectrum_csv(s, path)
        back = read_spectrum_csv(path)
        assert back.grid == s.grid
        np.testing.assert_array_equal(back.density, s.density)

    def test_header(self, tmp_path):
        s = gaussian_spectrum(count=16)
        path = tmp_path / "spec.csv"
        write_spectrum_csv(s, path)
        header = path.read_text().splitlines()[0]
        assert header == "wavenumber_cm-1,density_uW_per_cm-1"
