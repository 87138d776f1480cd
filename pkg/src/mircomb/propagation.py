"""Nonlinear fiber propagation by symmetric split-step Fourier method.

Solves the generalized nonlinear Schroedinger equation

    dA/dz = -(alpha/2) A - i (beta2/2) d2A/dt2 + (beta3/6) d3A/dt3
            + i gamma (1 + i tau_sh d/dt) [ A * (R conv |A|^2) ]

with R(t) = (1 - f_R) delta(t) + f_R h_R(t) and h_R the two-time-constant
damped-oscillator Raman response. The step schedule is adaptive on the
per-step nonlinear phase but derived from the field alone, so identical
inputs always take identical steps and the output is bit-reproducible.

Frequency-domain bookkeeping follows the physics convention used in
pulse.py: analysis transform is ifft, relative angular frequency omega
maps to optical frequency omega0 + omega, the linear propagator is
exp[(i beta2 omega^2 / 2 + i beta3 omega^3 / 6 - alpha/2) dz] and the
self-steepening factor is (1 + omega/omega0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericsError, PhysicsError
from .pulse import ComplexEnvelope, TimeGrid, apply_chirp, to_spectrum
from .spectral import PowerSpectrum, SpectralGrid, wavelength_to_wavenumber


@dataclass(frozen=True)
class FiberParams:
    """Fiber constants in SI units.

    length m; beta2 s^2/m; beta3 s^3/m; gamma 1/(W m); alpha 1/m (power
    loss); raman_fraction dimensionless in [0, 1); raman_tau1/raman_tau2
    s; self_steepening switches the optical shock term on.
    """

    length: float
    beta2: float
    beta3: float = 0.0
    gamma: float = 0.0
    alpha: float = 0.0
    raman_fraction: float = 0.0
    raman_tau1: float = 12.2e-15
    raman_tau2: float = 32.0e-15
    self_steepening: bool = False

    def __post_init__(self):
        if not self.length > 0:
            raise ValueError(f"fiber length must be > 0 m, got {self.length}")
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if self.alpha < 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if not 0 <= self.raman_fraction < 1:
            raise ValueError(
                f"raman_fraction must lie in [0, 1), got {self.raman_fraction}"
            )
        if self.raman_fraction > 0 and not (self.raman_tau1 > 0 and self.raman_tau2 > 0):
            raise ValueError("raman time constants must be > 0 s")


@dataclass(frozen=True)
class StepControl:
    """Step-size policy: base step dz (m), nonlinear phase cap per step
    (rad, in (0, 0.1]), and a hard cap on the total number of steps."""

    dz: float = 1e-3
    max_nonlinear_phase_per_step: float = 0.02
    hard_step_cap: int = 500_000

    def __post_init__(self):
        if not self.dz > 0:
            raise ValueError(f"dz must be > 0 m, got {self.dz}")
        if not 0 < self.max_nonlinear_phase_per_step <= 0.1:
            raise ValueError(
                "max_nonlinear_phase_per_step must lie in (0, 0.1], got "
                f"{self.max_nonlinear_phase_per_step}"
            )
        if self.hard_step_cap < 1:
            raise ValueError("hard_step_cap must be >= 1")


def raman_response(grid: TimeGrid, tau1: float, tau2: float) -> np.ndarray:
    """Sampled causal Raman response on [0, window), unit discrete area.

    h_R(t) = (tau1^2 + tau2^2) / (tau1 tau2^2) exp(-t/tau2) sin(t/tau1),
    renormalized so that sum(h) * dt == 1 exactly on this grid.
    """
    t = np.arange(grid.n) * grid.dt
    h = (tau1**2 + tau2**2) / (tau1 * tau2**2) * np.exp(-t / tau2) * np.sin(t / tau1)
    area = h.sum() * grid.dt
    if area <= 0:
        raise ValueError("raman response has non-positive area; check tau1/tau2")
    return h / area


def _edge_energy_fraction(aw: np.ndarray) -> float:
    """Fraction of spectral energy in the outermost ~6% of frequency bins."""
    n = len(aw)
    k = max(2, n // 32)
    p = np.abs(aw) ** 2
    total = p.sum()
    if total == 0:
        return 0.0
    # bin order is [0 .. +f .. -f .. -df]; edges are around n//2
    edge = p[n // 2 - k: n // 2 + k].sum()
    return float(edge / total)


def propagate(e: ComplexEnvelope, fiber: FiberParams, ctl: StepControl) -> ComplexEnvelope:
    """Propagate an envelope through the fiber; pure and deterministic.

    Aborts with NumericsError if spectral energy piles up at the grid
    edge (aliasing guard, 1e-6 of total) or the field goes NaN.
    """
    grid = e.grid
    w = grid.angular_frequencies()
    w0 = 2.0 * math.pi * e.center_frequency

    lin_rate = 1j * (fiber.beta2 / 2.0) * w**2 + 1j * (fiber.beta3 / 6.0) * w**3 \
        - fiber.alpha / 2.0

    f_r = fiber.raman_fraction
    if f_r > 0:
        h = raman_response(grid, fiber.raman_tau1, fiber.raman_tau2)
        # transfer function for the circular convolution dt * (h conv I);
        # unit area makes H(omega = 0) exactly 1
        h_w = np.fft.ifft(h) * grid.window
    else:
        h_w = None
    shock = np.clip(1.0 + w / w0, 0.0, None) if fiber.self_steepening else None

    def conv_response(a):
        """(1-f_R)|A|^2 + f_R (h_R conv |A|^2), time domain."""
        inten = np.abs(a) ** 2
        if h_w is None:
            return inten
        raman = np.fft.fft(np.fft.ifft(inten) * h_w).real
        return (1.0 - f_r) * inten + f_r * raman

    def nonlinear_rate(a):
        """N(A) = i gamma (1 + omega/omega0)[A conv] for the RK4 branch."""
        b = a * conv_response(a)
        return 1j * fiber.gamma * np.fft.fft(np.fft.ifft(b) * shock)

    a = e.samples.astype(complex)
    z = 0.0
    steps = 0
    gamma = fiber.gamma
    while z < fiber.length:
        steps += 1
        if steps > ctl.hard_step_cap:
            raise NumericsError(
                f"propagation.propagate: exceeded hard step cap {ctl.hard_step_cap}"
            )
        p_max = float(np.max(np.abs(a) ** 2))
        dz = ctl.dz
        if gamma > 0 and p_max > 0:
            dz = min(dz, ctl.max_nonlinear_phase_per_step / (gamma * p_max))
        dz = min(dz, fiber.length - z)

        half = np.exp(lin_rate * (dz / 2.0))
        aw = np.fft.ifft(a) * half
        a = np.fft.fft(aw)
        if gamma > 0:
            if shock is None:
                a = a * np.exp(1j * gamma * dz * conv_response(a))
            else:
                k1 = nonlinear_rate(a)
                k2 = nonlinear_rate(a + 0.5 * dz * k1)
                k3 = nonlinear_rate(a + 0.5 * dz * k2)
                k4 = nonlinear_rate(a + dz * k3)
                a = a + (dz / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        aw = np.fft.ifft(a) * half
        a = np.fft.fft(aw)
        z += dz

        if not np.all(np.isfinite(a)):
            raise NumericsError(
                f"propagation.propagate: field went non-finite at z = {z:.4e} m"
            )
        frac = _edge_energy_fraction(aw)
        if frac > 1e-6:
            raise NumericsError(
                "propagation.propagate: aliasing guard tripped at "
                f"z = {z:.4e} m ({frac:.2e} of spectral energy at the grid edge); "
                "use a finer dt or larger grid"
            )

    return ComplexEnvelope(grid, a, e.center_wavelength)


def simulate_supercontinuum(seed: ComplexEnvelope, fiber: FiberParams,
                            gdd_setting: float, *, sc_power_mw: float = 160.0,
                            f_rep: float = 4e7,
                            ctl: StepControl | None = None) -> PowerSpectrum:
    """Chirp the seed, run it through the fiber, return the output spectrum.

    gdd_setting (s^2) is the pre-fiber chirp knob that tunes where the
    red-shifted continuum lands; the output is normalized to the branch
    quasi-cw power (default 160 mW).
    """
    if ctl is None:
        ctl = StepControl()
    chirped = apply_chirp(seed, gdd_setting)
    out = propagate(chirped, fiber, ctl)
    return to_spectrum(out, sc_power_mw, f_rep)


def phenomenological_continuum(center_wavelength: float, fwhm: float,
                               power: float) -> PowerSpectrum:
    """Gaussian near-infrared continuum without running the fiber model.

    center_wavelength um in [1.6, 2.4], fwhm cm^-1, power mW. Total power
    is normalized numerically, so it holds to rounding even though the
    grid truncates the far tails.
    """
    if not 1.6 <= center_wavelength <= 2.4:
        raise PhysicsError(
            "propagation.phenomenological_continuum: center wavelength "
            f"{center_wavelength} um outside 1.6-2.4 um"
        )
    if not fwhm > 0:
        raise ValueError(f"fwhm must be > 0 cm^-1, got {fwhm}")
    if not power > 0:
        raise ValueError(f"power must be > 0 mW, got {power}")
    center = wavelength_to_wavenumber(center_wavelength)
    step = fwhm / 64.0
    half_span = 3.5 * fwhm
    start = center - half_span
    count = int(round(2 * half_span / step)) + 1
    grid = SpectralGrid(start, step, count)
    nu = grid.wavenumbers()
    d = np.exp(-4.0 * math.log(2.0) * ((nu - center) / fwhm) ** 2)
    d *= power * 1e3 / np.trapezoid(d, dx=step)
    return PowerSpectrum(grid, d)
