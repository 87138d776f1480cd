"""Pulses, chirp, and their spectra.

A transform-limited 100 fs Gaussian at 1.55 um has a 147 cm^-1 wide
spectrum (time-bandwidth product 0.44). Group-delay dispersion broadens
the pulse in time while leaving the spectral magnitude untouched: that
chirp is the tuning knob that later moves the supercontinuum around.
"""

from pathlib import Path

import numpy as np

from mircomb import TimeGrid, apply_chirp, duration_fwhm, fwhm, gaussian_pulse, to_spectrum

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

grid = TimeGrid(4096, 4e-15)
pulse = gaussian_pulse(100e-15, 8.45e4, 1.55, grid)  # 9 nJ at 40 MHz
print(f"pulse: fwhm {duration_fwhm(pulse) * 1e15:.1f} fs, "
      f"energy {pulse.energy() * 1e9:.2f} nJ, peak {pulse.power().max() / 1e3:.1f} kW")

spectrum = to_spectrum(pulse, 360.0, 4e7)
print(f"spectrum: centered {spectrum.peak_wavenumber():.1f} cm^-1, "
      f"fwhm {fwhm(spectrum):.1f} cm^-1 (expect 147)")

print("\nchirp broadens the pulse, not the spectrum:")
rows = []
for gdd_fs2 in (0.0, 2000.0, 5000.0, 10000.0, 20000.0):
    chirped = apply_chirp(pulse, gdd_fs2 * 1e-30)
    t = duration_fwhm(chirped) * 1e15
    w = fwhm(to_spectrum(chirped, 360.0, 4e7))
    rows.append((gdd_fs2, t, w))
    print(f"  gdd {gdd_fs2:7.0f} fs^2: duration {t:7.1f} fs, spectral fwhm {w:.1f} cm^-1")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))
    t = grid.times() * 1e12
    ax1.plot(t, pulse.power() / 1e3, label="unchirped")
    ax1.plot(t, apply_chirp(pulse, 1e-26).power() / 1e3, label="10000 fs$^2$")
    ax1.set(xlim=(-1.5, 1.5), xlabel="time (ps)", ylabel="power (kW)")
    ax1.legend()
    ax2.plot(spectrum.wavenumbers(), spectrum.density)
    ax2.set(xlim=(6000, 6900), xlabel="wavenumber (cm$^{-1}$)",
            ylabel="density (uW / cm$^{-1}$)")
    fig.tight_layout()
    fig.savefig(OUT / "02_pulse_and_spectrum.svg")
    print(f"\nwrote {OUT / '02_pulse_and_spectrum.svg'}")
except ImportError:
    print("\nmatplotlib not available; skipped the figure")
