"""Uniform wavenumber grids, power spectra, and scalar spectral descriptors.

All spectra in this package live on uniform grids in wavenumber (cm^-1)
with spectral power density in uW per cm^-1; wavelengths are um and
frequencies Hz. These units are fixed package-wide, so no unit objects
are carried around. All values are immutable after construction and all
functions here are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PhysicsError

#: speed of light in cm/s; the single conversion constant between
#: wavenumber (cm^-1) and frequency (Hz).
C_CM_PER_S = 2.99792458e10


def _readonly(a: np.ndarray) -> np.ndarray:
    out = np.asarray(a, dtype=float).copy()
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class SpectralGrid:
    """Uniform wavenumber axis: start, step (both cm^-1) and point count."""

    start: float
    step: float
    count: int

    def __post_init__(self):
        if not (math.isfinite(self.start) and self.start > 0):
            raise ValueError(f"grid start must be finite and > 0, got {self.start}")
        if not (math.isfinite(self.step) and self.step > 0):
            raise ValueError(f"grid step must be finite and > 0, got {self.step}")
        if int(self.count) != self.count or self.count < 2:
            raise ValueError(f"grid count must be an integer >= 2, got {self.count}")
        object.__setattr__(self, "count", int(self.count))
        if not math.isfinite(self.stop):
            raise ValueError("grid end point is not finite")

    @property
    def stop(self) -> float:
        """Last grid point (inclusive), cm^-1."""
        return self.start + self.step * (self.count - 1)

    def wavenumbers(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.count)

    def contains(self, nu: float) -> bool:
        return self.start <= nu <= self.stop


@dataclass(frozen=True)
class PowerSpectrum:
    """Spectral power density (uW per cm^-1) sampled on a SpectralGrid."""

    grid: SpectralGrid
    density: np.ndarray = field(repr=False)

    def __post_init__(self):
        d = np.asarray(self.density, dtype=float)
        if d.shape != (self.grid.count,):
            raise ValueError(
                f"density length {d.shape} does not match grid count {self.grid.count}"
            )
        if not np.all(np.isfinite(d)):
            raise ValueError("density contains non-finite values")
        if np.any(d < 0):
            raise ValueError("density contains negative values")
        object.__setattr__(self, "density", _readonly(d))

    def wavenumbers(self) -> np.ndarray:
        return self.grid.wavenumbers()

    def peak_wavenumber(self) -> float:
        """Grid point of the global density maximum."""
        return self.grid.start + self.grid.step * int(np.argmax(self.density))

    def with_density(self, density: np.ndarray) -> "PowerSpectrum":
        return PowerSpectrum(self.grid, density)


@dataclass(frozen=True)
class Band:
    """Closed wavenumber interval [lo, hi], cm^-1.

    Zero-width bands (lo == hi) are admitted as degenerate limits, e.g.
    the coverage of a collapsed continuum band.
    """

    lo: float
    hi: float

    def __post_init__(self):
        if not (0 < self.lo <= self.hi):
            raise ValueError(f"band requires 0 < lo <= hi, got [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo


def wavenumber_to_frequency(nu: float) -> float:
    """Convert wavenumber (cm^-1) to frequency (Hz): nu * c."""
    return nu * C_CM_PER_S


def frequency_to_wavenumber(f_hz: float) -> float:
    """Convert frequency (Hz) to wavenumber (cm^-1)."""
    return f_hz / C_CM_PER_S


def wavelength_to_wavenumber(lam_um: float) -> float:
    """Convert wavelength (um) to wavenumber (cm^-1): 1e4 / lambda.

    Note: quoted round-number ranges mix conventions; e.g. 17 um is
    588.2 cm^-1, commonly rounded to 600 cm^-1. Wavenumber figures are
    authoritative throughout this package.
    """
    if not lam_um > 0:
        raise ValueError(f"wavelength must be > 0 um, got {lam_um}")
    return 1e4 / lam_um


def wavenumber_to_wavelength(nu: float) -> float:
    """Convert wavenumber (cm^-1) to wavelength (um)."""
    if not nu > 0:
        raise ValueError(f"wavenumber must be > 0 cm^-1, got {nu}")
    return 1e4 / nu


def _peak_index(s: PowerSpectrum) -> int:
    d = s.density
    i = int(np.argmax(d))
    if d[i] <= 0:
        raise PhysicsError("spectral.fwhm: all-zero spectrum has no peak")
    return i


def _cross(x0, y0, x1, y1, level):
    """Linear-interpolated x where the segment (x0,y0)-(x1,y1) meets level."""
    if y1 == y0:
        return x0
    return x0 + (level - y0) * (x1 - x0) / (y1 - y0)


def _level_edges(s: PowerSpectrum, level_abs: float, contiguous: bool):
    """Edges of the region >= level_abs around the peak.

    contiguous=True walks outward from the peak and stops at the first
    dip below the level (usable-band convention); contiguous=False takes
    the outermost crossings bracketing the peak (FWHM convention).
    """
    d = s.density
    x = s.wavenumbers()
    pk = _peak_index(s)
    n = len(d)

    if contiguous:
        lo_i = pk
        while lo_i > 0 and d[lo_i - 1] >= level_abs:
            lo_i -= 1
        hi_i = pk
        while hi_i < n - 1 and d[hi_i + 1] >= level_abs:
            hi_i += 1
    else:
        below_left = np.nonzero(d[:pk] < level_abs)[0]
        below_right = np.nonzero(d[pk + 1:] < level_abs)[0]
        lo_i = int(below_left[-1]) + 1 if below_left.size else 0
        hi_i = pk + 1 + int(below_right[0]) - 1 if below_right.size else n - 1

    if lo_i == 0 and d[0] >= level_abs:
        raise PhysicsError(
            "spectral: peak region reaches the grid start; "
            "low-side level crossing is missing"
        )
    if hi_i == n - 1 and d[n - 1] >= level_abs:
        raise PhysicsError(
            "spectral: peak region reaches the grid end; "
            "high-side level crossing is missing"
        )
    lo = _cross(x[lo_i], d[lo_i], x[lo_i - 1], d[lo_i - 1], level_abs)
    hi = _cross(x[hi_i], d[hi_i], x[hi_i + 1], d[hi_i + 1], level_abs)
    return lo, hi


def fwhm(s: PowerSpectrum) -> float:
    """Full width at half maximum of the density, cm^-1.

    Uses the outermost half-maximum crossings bracketing the peak, with
    linear interpolation between grid points. A single nonzero bin
    therefore reports one grid step. Raises PhysicsError for an all-zero
    spectrum or when a crossing falls off the grid.
    """
    pk = _peak_index(s)
    lo, hi = _level_edges(s, 0.5 * s.density[pk], contiguous=False)
    return hi - lo


def usable_width(s: PowerSpectrum, level: float = 0.1) -> Band:
    """Maximal contiguous band containing the peak with density >= level*peak.

    This is the 'usable for spectroscopy' criterion: the default level of
    0.1 marks where the density falls to 10% of its peak. Edges are
    linearly interpolated. Raises PhysicsError on the same degenerate
    cases as fwhm().
    """
    if not 0 < level < 1:
        raise ValueError(f"level must be in (0, 1), got {level}")
    pk = _peak_index(s)
    lo, hi = _level_edges(s, level * s.density[pk], contiguous=True)
    return Band(lo, hi)


def total_power(s: PowerSpectrum) -> float:
    """Trapezoidal integral of the density over the grid, uW."""
    return float(np.trapezoid(s.density, dx=s.grid.step))


def band_power(s: PowerSpectrum, band: Band) -> float:
    """Trapezoidal integral restricted to band, with interpolated edges (uW)."""
    x = s.wavenumbers()
    lo = max(band.lo, x[0])
    hi = min(band.hi, x[-1])
    if hi <= lo:
        return 0.0
    xs = np.unique(np.concatenate(([lo, hi], x[(x > lo) & (x < hi)])))
    ys = np.interp(xs, x, s.density)
    return float(np.trapezoid(ys, xs))


def is_octave(b: Band) -> bool:
    """True iff the band spans at least a factor of two (hi >= 2*lo).

    The exact boundary counts as an octave.
    """
    return b.hi >= 2.0 * b.lo


def write_spectrum_csv(s: PowerSpectrum, path) -> None:
    """Write a spectrum as two-column CSV, ascending wavenumber.

    Full double precision (17 significant digits) so files round-trip
    bit-for-bit.
    """
    x = s.wavenumbers()
    with open(path, "w", newline="") as fh:
        fh.write("wavenumber_cm-1,density_uW_per_cm-1\n")
        for xi, di in zip(x, s.density):
            fh.write(f"{xi:.17g},{di:.17g}\n")


def read_spectrum_csv(path) -> PowerSpectrum:
    """Read a spectrum written by write_spectrum_csv.

    The wavenumber column must be uniform and ascending; it is converted
    back to a SpectralGrid.
    """
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] != 2:
        raise ValueError(f"{path}: expected two columns")
    x, d = data[:, 0], data[:, 1]
    steps = np.diff(x)
    if len(steps) == 0 or np.any(steps <= 0):
        raise ValueError(f"{path}: wavenumber column must be strictly ascending")
    step = float(np.mean(steps))
    if np.max(np.abs(steps - step)) > 1e-6 * step:
        raise ValueError(f"{path}: wavenumber column is not uniform")
    return PowerSpectrum(SpectralGrid(float(x[0]), step, len(x)), d)
