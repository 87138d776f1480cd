"""Frequency-comb arithmetic: tooth positions, mode counts, per-mode power.

A comb is metadata (repetition rate and carrier-envelope offset, both Hz)
attached to a spectral envelope. Teeth are indexed from absolute zero
frequency, f_n = n * f_rep + f_ceo, the standard metrology convention;
the envelope decides which teeth actually carry power. Difference-
frequency mixing of two combs sharing one oscillator subtracts the
offsets, which is what makes the down-converted comb harmonic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PhysicsError
from .spectral import Band, C_CM_PER_S, PowerSpectrum


@dataclass(frozen=True)
class CombDescriptor:
    """A frequency comb: f_rep, f_ceo (Hz) over a spectral envelope."""

    f_rep: float
    f_ceo: float
    envelope: PowerSpectrum

    def __post_init__(self):
        if not self.f_rep > 0:
            raise ValueError(f"f_rep must be > 0 Hz, got {self.f_rep}")
        if not 0 <= self.f_ceo < self.f_rep:
            raise ValueError(
                f"f_ceo must lie in [0, f_rep), got {self.f_ceo} with f_rep {self.f_rep}"
            )

    @property
    def tooth_spacing_wavenumber(self) -> float:
        """Comb tooth spacing expressed in cm^-1 (f_rep / c)."""
        return self.f_rep / C_CM_PER_S


def dfg_comb(a: CombDescriptor, b: CombDescriptor, envelope: PowerSpectrum) -> CombDescriptor:
    """Comb produced by difference-frequency mixing of combs a and b.

    Both inputs must share one oscillator, i.e. have exactly equal
    repetition rates. The output offset is (a.f_ceo - b.f_ceo) reduced
    into [0, f_rep); equal input offsets cancel exactly, which is the
    mechanism that makes the mid-infrared output harmonic.
    """
    if a.f_rep != b.f_rep:
        raise PhysicsError(
            f"comb.dfg_comb: repetition rates differ ({a.f_rep} vs {b.f_rep} Hz); "
            "both branches must derive from one oscillator"
        )
    f_ceo = (a.f_ceo - b.f_ceo) % a.f_rep
    if f_ceo == a.f_rep:  # guard against roundoff landing exactly on f_rep
        f_ceo = 0.0
    return CombDescriptor(a.f_rep, f_ceo, envelope)


def is_harmonic(c: CombDescriptor) -> bool:
    """True iff every tooth is an exact multiple of f_rep (f_ceo == 0)."""
    return c.f_ceo == 0


def tooth_frequency(c: CombDescriptor, n: int) -> float:
    """Frequency (Hz) of tooth n: n * f_rep + f_ceo."""
    if n < 0:
        raise ValueError(f"tooth index must be >= 0, got {n}")
    return n * c.f_rep + c.f_ceo


def mode_count(c: CombDescriptor, band: Band) -> int:
    """Exact number of comb teeth inside band (band given in cm^-1).

    The comparison is done in frequency units: count integers n with
    band.lo * c <= n * f_rep + f_ceo <= band.hi * c.
    """
    lo_hz = band.lo * C_CM_PER_S
    hi_hz = band.hi * C_CM_PER_S
    n_lo = math.ceil((lo_hz - c.f_ceo) / c.f_rep)
    n_hi = math.floor((hi_hz - c.f_ceo) / c.f_rep)
    n_lo = max(n_lo, 0)
    return max(n_hi - n_lo + 1, 0)


def power_per_mode(s: PowerSpectrum, f_rep: float, nu: float) -> float:
    """Optical power carried by one comb mode at nu (cm^-1), in watts.

    Density is interpolated linearly and multiplied by the tooth spacing
    expressed in cm^-1 (f_rep / c); 1 uW/cm^-1 at 40 MHz is 1.334 nW per
    mode.
    """
    if not s.grid.contains(nu):
        raise PhysicsError(
            f"comb.power_per_mode: {nu} cm^-1 outside spectrum grid "
            f"[{s.grid.start}, {s.grid.stop}]"
        )
    density = float(np.interp(nu, s.wavenumbers(), s.density))  # uW per cm^-1
    return density * 1e-6 * (f_rep / C_CM_PER_S)
