"""Time-domain complex pulse envelopes and their power spectra.

Envelopes are sampled analytic signals about the carrier: A(t) with
|A|^2 in watts, carried on a centered power-of-two time grid. The
spectral transform uses the physics sign convention (envelope component
exp(-i*omega*t) sits at optical frequency f0 + omega/2pi), implemented
with ifft as the analysis direction, so that red-shifted light lands at
lower wavenumbers downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PhysicsError
from .spectral import C_CM_PER_S, PowerSpectrum, SpectralGrid

#: FWHM of a Gaussian divided by its 1/e amplitude half-width T0.
GAUSSIAN_FWHM_OVER_T0 = 2.0 * math.sqrt(math.log(2.0))
#: FWHM of sech^2 intensity divided by t0: 2*ln(1+sqrt(2)).
SECH_FWHM_OVER_T0 = 2.0 * math.log(1.0 + math.sqrt(2.0))

_MIN_WINDOW_FACTOR = 20.0


@dataclass(frozen=True)
class TimeGrid:
    """Centered uniform time axis with n (power of two) samples of dt seconds."""

    n: int
    dt: float

    def __post_init__(self):
        if self.n < 64 or (self.n & (self.n - 1)) != 0:
            raise ValueError(f"sample count must be a power of two >= 64, got {self.n}")
        if not self.dt > 0:
            raise ValueError(f"dt must be > 0 s, got {self.dt}")

    @property
    def window(self) -> float:
        return self.n * self.dt

    def times(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.dt

    def angular_frequencies(self) -> np.ndarray:
        """Relative angular frequencies (rad/s) in FFT bin order."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n, self.dt)


@dataclass(frozen=True)
class ComplexEnvelope:
    """Sampled complex field A(t) with |A|^2 in W, about center_wavelength (um)."""

    grid: TimeGrid
    samples: np.ndarray = field(repr=False)
    center_wavelength: float

    def __post_init__(self):
        a = np.asarray(self.samples, dtype=complex).copy()
        if a.shape != (self.grid.n,):
            raise ValueError("sample count does not match time grid")
        if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
            raise ValueError("envelope contains non-finite samples")
        if not 1.0 <= self.center_wavelength <= 3.0:
            raise ValueError(
                f"center wavelength {self.center_wavelength} um outside the "
                "near-infrared range 1.0-3.0 um"
            )
        a.flags.writeable = False
        object.__setattr__(self, "samples", a)

    @property
    def center_frequency(self) -> float:
        """Carrier frequency, Hz."""
        return C_CM_PER_S * 1e4 / self.center_wavelength

    def power(self) -> np.ndarray:
        return np.abs(self.samples) ** 2

    def energy(self) -> float:
        """Pulse energy, J (trapezoid of |A|^2 over the window)."""
        return float(np.trapezoid(self.power(), dx=self.grid.dt))


def _check_window(grid: TimeGrid, duration: float, what: str) -> None:
    if grid.window < _MIN_WINDOW_FACTOR * duration:
        raise PhysicsError(
            f"pulse.{what}: time window {grid.window:.3e} s is below "
            f"{_MIN_WINDOW_FACTOR:.0f}x the pulse duration {duration:.3e} s; "
            "enlarge the grid"
        )


def gaussian_pulse(t_fwhm: float, p_peak: float, center_wavelength: float,
                   grid: TimeGrid) -> ComplexEnvelope:
    """Transform-limited Gaussian: |A(t)|^2 = p_peak * exp(-4 ln2 t^2 / t_fwhm^2)."""
    if not t_fwhm > 0:
        raise ValueError(f"t_fwhm must be > 0 s, got {t_fwhm}")
    if not p_peak > 0:
        raise ValueError(f"p_peak must be > 0 W, got {p_peak}")
    _check_window(grid, t_fwhm, "gaussian_pulse")
    t = grid.times()
    amp = math.sqrt(p_peak) * np.exp(-2.0 * math.log(2.0) * (t / t_fwhm) ** 2)
    return ComplexEnvelope(grid, amp.astype(complex), center_wavelength)


def sech_pulse(t0: float, p0: float, center_wavelength: float,
               grid: TimeGrid) -> ComplexEnvelope:
    """Soliton-shaped pulse A(t) = sqrt(p0) * sech(t / t0)."""
    if not t0 > 0:
        raise ValueError(f"t0 must be > 0 s, got {t0}")
    if not p0 > 0:
        raise ValueError(f"p0 must be > 0 W, got {p0}")
    _check_window(grid, SECH_FWHM_OVER_T0 * t0, "sech_pulse")
    t = grid.times()
    amp = math.sqrt(p0) / np.cosh(t / t0)
    return ComplexEnvelope(grid, amp.astype(complex), center_wavelength)


def spectral_amplitude(e: ComplexEnvelope) -> np.ndarray:
    """Frequency-domain amplitude (FFT bin order), physics convention.

    Scaled so that sum(|out|^2) * df equals the time-domain energy
    (continuous-transform normalization, units J/Hz under the modulus
    squared).
    """
    return np.fft.ifft(e.samples) * e.grid.window


def from_spectral_amplitude(aw: np.ndarray, grid: TimeGrid,
                            center_wavelength: float) -> ComplexEnvelope:
    """Inverse of spectral_amplitude."""
    return ComplexEnvelope(grid, np.fft.fft(aw) / grid.window, center_wavelength)


def energy_spectral_density(e: ComplexEnvelope):
    """(optical frequency Hz, energy spectral density J/Hz), ascending.

    Parseval holds: trapz(esd, f) equals the time-domain pulse energy to
    rounding. Frequencies may extend to <= 0 for very wide grids; callers
    mapping to wavenumber must drop that region.
    """
    aw = spectral_amplitude(e)
    f_rel = np.fft.fftfreq(e.grid.n, e.grid.dt)
    f = np.fft.fftshift(f_rel) + e.center_frequency
    esd = np.fft.fftshift(np.abs(aw) ** 2)
    return f, esd


def to_spectrum(e: ComplexEnvelope, avg_power_scale: float, f_rep: float) -> PowerSpectrum:
    """Map the envelope onto a wavenumber PowerSpectrum.

    avg_power_scale is the quasi-cw average power in mW the pulse train
    carries (pulse energy times f_rep); the returned spectrum is
    normalized so total_power equals it exactly. Only the positive-
    wavenumber part is kept; the grid is uniform with step 1/(n dt c),
    centered on 1e4/center_wavelength.
    """
    if not avg_power_scale > 0:
        raise ValueError(f"avg_power_scale must be > 0 mW, got {avg_power_scale}")
    if not f_rep > 0:
        raise ValueError(f"f_rep must be > 0 Hz, got {f_rep}")
    f, esd = energy_spectral_density(e)
    nu = f / C_CM_PER_S
    keep = nu > 0
    nu = nu[keep]
    esd = esd[keep]
    step = 1.0 / (e.grid.window * C_CM_PER_S)
    grid = SpectralGrid(float(nu[0]), step, len(nu))
    raw = np.trapezoid(esd, dx=step)
    if raw <= 0:
        raise PhysicsError("pulse.to_spectrum: envelope carries no energy")
    density = esd * (avg_power_scale * 1e3 / raw)  # uW per cm^-1
    return PowerSpectrum(grid, density)


def apply_chirp(e: ComplexEnvelope, gdd: float) -> ComplexEnvelope:
    """Apply group-delay dispersion gdd (s^2) as pure spectral phase.

    The spectral magnitude is untouched; the time-domain envelope
    broadens with |gdd|.
    """
    if gdd == 0:
        return e
    aw = spectral_amplitude(e)
    w = e.grid.angular_frequencies()
    aw = aw * np.exp(0.5j * gdd * w * w)
    return from_spectral_amplitude(aw, e.grid, e.center_wavelength)


def write_envelope_csv(e: ComplexEnvelope, path) -> None:
    """Write an envelope as CSV with columns time_s, re, im."""
    t = e.grid.times()
    with open(path, "w", newline="") as fh:
        fh.write("time_s,re,im\n")
        for ti, a in zip(t, e.samples):
            fh.write(f"{ti:.17g},{a.real:.17g},{a.imag:.17g}\n")


def read_envelope_csv(path, center_wavelength: float) -> ComplexEnvelope:
    """Read an envelope written by write_envelope_csv.

    The time column must be a uniform power-of-two grid; the carrier
    wavelength is not stored in the file and must be supplied.
    """
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] != 3:
        raise ValueError(f"{path}: expected columns time_s, re, im")
    t = data[:, 0]
    dt = float(np.mean(np.diff(t)))
    if np.max(np.abs(np.diff(t) - dt)) > 1e-9 * dt:
        raise ValueError(f"{path}: time column is not uniform")
    grid = TimeGrid(len(t), dt)
    return ComplexEnvelope(grid, data[:, 1] + 1j * data[:, 2], center_wavelength)


def duration_fwhm(e: ComplexEnvelope) -> float:
    """FWHM of |A(t)|^2 with linear interpolation, seconds."""
    p = e.power()
    i = int(np.argmax(p))
    pk = p[i]
    if pk <= 0:
        raise PhysicsError("pulse.duration_fwhm: all-zero envelope")
    half = 0.5 * pk
    t = e.grid.times()
    below_left = np.nonzero(p[:i] < half)[0]
    below_right = np.nonzero(p[i + 1:] < half)[0]
    if not below_left.size or not below_right.size:
        raise PhysicsError("pulse.duration_fwhm: pulse not contained in the window")
    li = int(below_left[-1])          # last sample below half on the left
    ri = i + 1 + int(below_right[0])  # first sample below half on the right
    t_lo = t[li] + (half - p[li]) * (t[li + 1] - t[li]) / (p[li + 1] - p[li])
    t_hi = t[ri - 1] + (half - p[ri - 1]) * (t[ri] - t[ri - 1]) / (p[ri] - p[ri - 1])
    return float(t_hi - t_lo)
