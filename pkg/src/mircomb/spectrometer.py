"""Spectrometer back-ends: FTIR, dual-comb down-conversion, detector budget.

The FTIR path synthesizes intensity versus optical path difference and
inverts it with a cosine transform; the spectral resolution convention
is 1/opd_max (boxcar; triangular apodization widens the instrument line
by the usual factor of about two).

The dual-comb path synthesizes the lab-time cross-correlation signal of
two combs whose repetition rates differ by delta_f_rep: one frame per
1/delta_f_rep, one sample per pulse pair, optical frequencies compressed
into the radio-frequency domain by f_rep/delta_f_rep. Frames are exact
repetitions of one synthesized sweep; detector noise is the only
frame-to-frame difference and comes from a seeded generator, so outputs
are bit-reproducible.

NEP is interpreted as watts of noise at the detector's stated
integration time; shorter dwell scales the noise by sqrt(t0/t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.fft import dct

from .errors import PhysicsError
from .spectral import (
    Band,
    C_CM_PER_S,
    PowerSpectrum,
    SpectralGrid,
    band_power,
    wavelength_to_wavenumber,
)


@dataclass(frozen=True)
class Interferogram:
    """Detector intensity (W) versus OPD (cm) or lab time (s)."""

    axis_kind: str  # "opd" | "labtime"
    step: float
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.axis_kind not in ("opd", "labtime"):
            raise ValueError(f"axis_kind must be 'opd' or 'labtime', got {self.axis_kind}")
        if not self.step > 0:
            raise ValueError(f"step must be > 0, got {self.step}")
        s = np.asarray(self.samples, dtype=float).copy()
        if s.ndim != 1 or len(s) < 2:
            raise ValueError("samples must be a 1-D array with at least 2 points")
        if not np.all(np.isfinite(s)):
            raise ValueError("samples contain non-finite values")
        s.flags.writeable = False
        object.__setattr__(self, "samples", s)

    def axis(self) -> np.ndarray:
        return self.step * np.arange(len(self.samples))


@dataclass(frozen=True)
class DetectorModel:
    """NEP (W at integration_time s), responsive band, short-pass blocker."""

    nep: float = 10e-12
    integration_time: float = 10e-3
    band: Band = Band(wavelength_to_wavenumber(20.0), wavelength_to_wavenumber(3.7))
    blocker_edge: float = 3.5  # um; radiation below this wavelength is blocked

    def __post_init__(self):
        if not self.nep > 0:
            raise ValueError(f"nep must be > 0 W, got {self.nep}")
        if not self.integration_time > 0:
            raise ValueError(f"integration_time must be > 0 s, got {self.integration_time}")
        if not self.blocker_edge > 0:
            raise ValueError(f"blocker_edge must be > 0 um, got {self.blocker_edge}")

    def noise_rms(self, dwell: float) -> float:
        """Noise (W rms) for a dwell time, scaled from the stated NEP."""
        return self.nep * math.sqrt(self.integration_time / dwell)


@dataclass(frozen=True)
class DualCombConfig:
    """Two combs at f_rep and f_rep + delta_f_rep, band-limited to optical_band."""

    f_rep: float
    delta_f_rep: float
    optical_band: Band

    def __post_init__(self):
        if not self.f_rep > 0:
            raise ValueError(f"f_rep must be > 0 Hz, got {self.f_rep}")
        if not 0 < self.delta_f_rep < self.f_rep:
            raise ValueError(
                f"delta_f_rep must lie in (0, f_rep), got {self.delta_f_rep}"
            )

    @property
    def compression_factor(self) -> float:
        """Optical-to-RF frequency compression, f_rep / delta_f_rep."""
        return self.f_rep / self.delta_f_rep

    @property
    def frame_rate(self) -> float:
        """Spectra per second, delta_f_rep."""
        return self.delta_f_rep


@dataclass(frozen=True)
class GasModel:
    """Synthetic Lorentzian absorption lines: (center cm^-1, peak absorbance, hwhm)."""

    lines: tuple
    pathlength_scale: float = 1.0

    def __post_init__(self):
        lines = tuple((float(c), float(a), float(w)) for c, a, w in self.lines)
        for center, absorbance, hwhm in lines:
            if not hwhm > 0:
                raise ValueError(f"line hwhm must be > 0, got {hwhm}")
            if absorbance < 0:
                raise ValueError(f"peak absorbance must be >= 0, got {absorbance}")
            if not center > 0:
                raise ValueError(f"line center must be > 0 cm^-1, got {center}")
        object.__setattr__(self, "lines", lines)
        if self.pathlength_scale < 0:
            raise ValueError("pathlength_scale must be >= 0")


def read_gas_csv(path) -> GasModel:
    """Read lines from CSV with columns center,peak_absorbance,hwhm."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.size and data.shape[1] != 3:
        raise ValueError(f"{path}: expected three columns center,peak_absorbance,hwhm")
    return GasModel(tuple(map(tuple, data)))


def write_gas_csv(gas: GasModel, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("center,peak_absorbance,hwhm\n")
        for center, absorbance, hwhm in gas.lines:
            fh.write(f"{center:.17g},{absorbance:.17g},{hwhm:.17g}\n")


def write_interferogram_csv(i: Interferogram, path) -> None:
    label = "opd_cm" if i.axis_kind == "opd" else "time_s"
    with open(path, "w", newline="") as fh:
        fh.write(f"{label},intensity_w\n")
        for x, y in zip(i.axis(), i.samples):
            fh.write(f"{x:.17g},{y:.17g}\n")


def read_interferogram_csv(path) -> Interferogram:
    """Read an interferogram written by write_interferogram_csv; the axis
    kind comes from the header column name."""
    with open(path) as fh:
        header = fh.readline().strip().split(",")
    if header[:1] == ["opd_cm"]:
        kind = "opd"
    elif header[:1] == ["time_s"]:
        kind = "labtime"
    else:
        raise ValueError(f"{path}: first column must be opd_cm or time_s")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    x = data[:, 0]
    step = float(np.mean(np.diff(x)))
    if np.max(np.abs(np.diff(x) - step)) > 1e-9 * step:
        raise ValueError(f"{path}: axis is not uniform")
    return Interferogram(kind, step, data[:, 1])


def interferogram_from_spectrum(s: PowerSpectrum, opd_max: float,
                                n_samples: int) -> Interferogram:
    """Synthesize I(opd) = integral S(nu) (1 + cos 2 pi nu opd) d nu.

    One-sided uniform OPD grid from 0 to opd_max (cm). The OPD step must
    satisfy Nyquist for the highest wavenumber on the grid.
    """
    if not opd_max > 0:
        raise ValueError(f"opd_max must be > 0 cm, got {opd_max}")
    if n_samples < 2:
        raise ValueError(f"n_samples must be >= 2, got {n_samples}")
    nu_max = s.grid.stop
    step = opd_max / (n_samples - 1)
    if step > 1.0 / (2.0 * nu_max):
        needed = int(math.ceil(opd_max * 2.0 * nu_max)) + 1
        raise PhysicsError(
            f"spectrometer.interferogram_from_spectrum: OPD step {step:.3e} cm "
            f"violates Nyquist for {nu_max:.1f} cm^-1; use n_samples >= {needed}"
        )
    delta = step * np.arange(n_samples)
    nu = s.wavenumbers()
    # intensity in W: density is uW/cm^-1, integral gives uW
    kernel = 1.0 + np.cos(2.0 * math.pi * np.outer(delta, nu))
    intensity = np.trapezoid(kernel * s.density[np.newaxis, :],
                             dx=s.grid.step, axis=1) * 1e-6
    return Interferogram("opd", step, intensity)


def ftir_resolution(opd_max: float) -> float:
    """Boxcar spectral resolution (cm^-1) of a one-sided scan to opd_max (cm)."""
    if not opd_max > 0:
        raise ValueError(f"opd_max must be > 0 cm, got {opd_max}")
    return 1.0 / opd_max


def spectrum_from_interferogram(i: Interferogram, apodization: str = "none",
                                pad_factor: int = 1) -> PowerSpectrum:
    """Recover the power spectrum from an OPD interferogram.

    The pedestal is removed as I(0)/2 (the zero-OPD burst is twice the
    total power), the remainder is cosine transformed (DCT-I), and the
    result is returned on a wavenumber grid with point spacing
    1/(2 opd_max) starting at the first positive bin; the resolution
    under the boxcar convention is 1/opd_max. Negative ringing from the
    truncation is clipped to zero. pad_factor > 1 zero-fills the
    interferogram before the transform, which interpolates the grid
    without changing resolution.
    """
    if i.axis_kind != "opd":
        raise PhysicsError(
            "spectrometer.spectrum_from_interferogram: lab-time interferograms "
            "belong to the dual-comb path (simulate_dualcomb)"
        )
    if apodization not in ("none", "triangular"):
        raise ValueError(f"unknown apodization {apodization!r}")
    if pad_factor < 1 or int(pad_factor) != pad_factor:
        raise ValueError(f"pad_factor must be a positive integer, got {pad_factor}")

    y = i.samples - 0.5 * i.samples[0]
    n = len(y)
    if apodization == "triangular":
        y = y * (1.0 - np.arange(n) / (n - 1))
    if pad_factor > 1:
        y = np.concatenate([y, np.zeros((pad_factor - 1) * n)])

    # trapezoid-weighted cosine sum via DCT-I: S(nu_k) = 4 dx sum'' y_j cos(pi j k / (N-1))
    spec = 2.0 * i.step * dct(y, type=1)  # W per cm^-1
    m = len(y)
    dnu = 1.0 / (2.0 * i.step * (m - 1))
    density = np.clip(spec[1:], 0.0, None) * 1e6  # drop nu = 0, to uW per cm^-1
    return PowerSpectrum(SpectralGrid(dnu, dnu, m - 1), density)


def apply_gas_absorption(s: PowerSpectrum, gas: GasModel) -> PowerSpectrum:
    """Attenuate the spectrum by Lorentzian absorbance lines (Beer-Lambert)."""
    nu = s.wavenumbers()
    absorbance = np.zeros_like(nu)
    for center, peak, hwhm in gas.lines:
        absorbance += peak * hwhm**2 / ((nu - center) ** 2 + hwhm**2)
    return s.with_density(s.density * np.exp(-gas.pathlength_scale * absorbance))


def sensor_reading(s: PowerSpectrum, d: DetectorModel) -> float:
    """Optical power (W) the sensor reports: band-limited, blocker applied."""
    blocker_nu = wavelength_to_wavenumber(d.blocker_edge)
    lo = d.band.lo
    hi = min(d.band.hi, blocker_nu)
    if hi <= lo:
        return 0.0
    return band_power(s, Band(lo, hi)) * 1e-6


def snr_direct(p_channel: float, d: DetectorModel) -> float:
    """Direct-detection signal-to-noise of one spectral channel: P / NEP."""
    if p_channel < 0:
        raise ValueError(f"channel power must be >= 0 W, got {p_channel}")
    return p_channel / d.nep


def snr_interferometric(p_ref_channel: float, d: DetectorModel) -> float:
    """Power dynamic range with a full-strength reference arm: (P_ref / NEP)^2.

    Interferometric detection measures the sample-arm amplitude against
    the reference arm, so the minimum detectable power transmittance is
    the reciprocal of this number.
    """
    if p_ref_channel < 0:
        raise ValueError(f"reference channel power must be >= 0 W, got {p_ref_channel}")
    return (p_ref_channel / d.nep) ** 2


def dualcomb_nyquist_bandwidth(cfg: DualCombConfig) -> float:
    """Widest alias-free optical bandwidth (Hz): f_rep^2 / (2 delta_f_rep).

    This is the optical span that maps below the RF Nyquist limit
    f_rep/2 under the comb-tooth compression f_rep/delta_f_rep.
    """
    return cfg.f_rep**2 / (2.0 * cfg.delta_f_rep)


def _rf_zone(cfg: DualCombConfig, nu_hz: float) -> int:
    return int(math.floor(nu_hz / cfg.compression_factor / (cfg.f_rep / 2.0)))


def simulate_dualcomb(s: PowerSpectrum, gas: GasModel | None, cfg: DualCombConfig,
                      frames: int, detector: DetectorModel, noise_seed: int):
    """Synthesize a dual-comb measurement and recover the optical spectrum.

    Returns (lab-time Interferogram of all frames, recovered PowerSpectrum).

    The optical input is band-limited to cfg.optical_band (after gas
    absorption, if any). One frame holds round(f_rep/delta_f_rep)
    samples, one per pulse pair; `frames` noisy repetitions are recorded
    and averaged before the transform. White detector noise at the
    per-sample dwell 1/f_rep comes from numpy's seeded default generator.
    """
    if frames < 1 or int(frames) != frames:
        raise ValueError(f"frames must be a positive integer, got {frames}")
    band = cfg.optical_band
    width_hz = (band.hi - band.lo) * C_CM_PER_S
    nyq = dualcomb_nyquist_bandwidth(cfg)
    if width_hz > nyq:
        raise PhysicsError(
            "spectrometer.simulate_dualcomb: optical band "
            f"{band.hi - band.lo:.2f} cm^-1 exceeds the alias-free bandwidth "
            f"{nyq / C_CM_PER_S:.2f} cm^-1; reduce delta_f_rep to at most "
            f"{cfg.f_rep**2 / (2.0 * width_hz):.1f} Hz"
        )
    zone_lo = _rf_zone(cfg, band.lo * C_CM_PER_S)
    zone_hi = _rf_zone(cfg, band.hi * C_CM_PER_S * (1 - 1e-12))
    if zone_lo != zone_hi:
        raise PhysicsError(
            "spectrometer.simulate_dualcomb: optical band straddles an RF Nyquist "
            f"zone boundary (zones {zone_lo} and {zone_hi}); reduce delta_f_rep or "
            "shift the band"
        )

    if gas is not None:
        s = apply_gas_absorption(s, gas)

    m = int(round(cfg.compression_factor))  # samples per frame, one per pulse pair
    # optical spacing of the frame harmonics: one bin per RF line
    bin_hz = cfg.f_rep**2 / (m * cfg.delta_f_rep)
    bin_cm = bin_hz / C_CM_PER_S

    # resample the band-limited input onto exact frame-harmonic optical bins,
    # so every synthesized cosine completes an integer number of cycles per frame
    k_lo = max(int(math.ceil(band.lo * C_CM_PER_S / bin_hz)), 1)
    k_hi = int(math.floor(band.hi * C_CM_PER_S / bin_hz))
    if k_hi < k_lo:
        raise PhysicsError(
            "spectrometer.simulate_dualcomb: optical band narrower than one bin"
        )
    k_opt = np.arange(k_lo, k_hi + 1)
    nu_bins = k_opt * bin_cm
    nu = s.wavenumbers()
    inside = (nu_bins >= nu[0]) & (nu_bins <= nu[-1])
    if not inside.any():
        raise PhysicsError(
            "spectrometer.simulate_dualcomb: spectrum has no samples inside "
            "the optical band"
        )
    dens_bins = np.where(inside, np.interp(nu_bins, nu, s.density), 0.0)
    a_k = dens_bins * bin_cm * 1e-6  # W carried per optical bin

    # frame_j = sum_k a_k (1 + cos(2 pi j k / m)): assemble the RF spectrum
    # directly and inverse-transform (every line sits on an exact DFT bin)
    k_fold = k_opt % m
    k_fold = np.where(k_fold > m // 2, m - k_fold, k_fold)
    rf = np.zeros(m // 2 + 1, dtype=complex)
    rf[0] = m * a_k.sum()
    np.add.at(rf, k_fold, 0.5 * m * a_k)
    frame = np.fft.irfft(rf, n=m)

    rng = np.random.default_rng(noise_seed)
    sigma = detector.noise_rms(1.0 / cfg.f_rep)
    noise = rng.normal(0.0, sigma, size=(frames, m)) if sigma > 0 else np.zeros((frames, m))
    record = np.tile(frame, frames) + noise.ravel()
    lab_record = Interferogram("labtime", 1.0 / cfg.f_rep, record)

    # average the frames, transform once, map RF lines back to optical bins
    avg = frame + noise.mean(axis=0)
    spec_rf = np.fft.rfft(avg - avg.mean())
    amp = 2.0 * np.abs(spec_rf) / m  # modulation amplitude per RF bin, W

    k_rf = k_fold
    valid = (k_rf > 0) & (k_rf < m / 2) & inside
    if valid.sum() < 2:
        raise PhysicsError(
            "spectrometer.simulate_dualcomb: fewer than two recoverable bins; "
            "widen the optical band or the input spectrum"
        )
    nu_out = nu_bins[valid]
    dens_out = amp[k_rf[valid]] / bin_cm * 1e6  # uW per cm^-1
    grid = SpectralGrid(float(nu_out[0]), bin_cm, len(nu_out))
    recovered = PowerSpectrum(grid, np.clip(dens_out, 0.0, None))
    return lab_record, recovered
