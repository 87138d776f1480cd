"""Units and comb arithmetic.

The whole package works in wavenumbers (cm^-1); this script walks the
unit bridges and the frequency-comb bookkeeping: how many teeth a
700 cm^-1 band holds at 40 MHz, what one tooth carries at the quoted
spectral density, and why mixing two branches of one oscillator yields
a harmonic comb (every tooth an exact multiple of f_rep).
"""

import numpy as np

from mircomb import (
    Band,
    CombDescriptor,
    PowerSpectrum,
    SpectralGrid,
    dfg_comb,
    is_harmonic,
    mode_count,
    power_per_mode,
    tooth_frequency,
    wavelength_to_wavenumber,
    wavenumber_to_frequency,
)

print("== unit bridges ==")
for lam in (1.55, 4.0, 10.0, 17.0):
    nu = wavelength_to_wavenumber(lam)
    print(f"  {lam:5.2f} um = {nu:8.1f} cm^-1 = {wavenumber_to_frequency(nu):.4e} Hz")

print("\n== comb in a 700 cm^-1 band at 40 MHz ==")
env = PowerSpectrum(SpectralGrid(600.0, 50.0, 17), np.ones(17))  # 1 uW/cm^-1
comb = CombDescriptor(f_rep=4e7, f_ceo=0.0, envelope=env)
band = Band(700.0, 1400.0)
n = mode_count(comb, band)
print(f"  modes in [700, 1400] cm^-1: {n} (about half a million)")
print(f"  tooth spacing: {comb.tooth_spacing_wavenumber:.3e} cm^-1")
print(f"  tooth #524637 sits at {tooth_frequency(comb, 524637):.6e} Hz "
      f"(= {tooth_frequency(comb, 524637) / 2.99792458e10:.2f} cm^-1)")
print(f"  power per mode at 1 uW/cm^-1: "
      f"{power_per_mode(env, 4e7, 1000.0) * 1e9:.3f} nW")

print("\n== offset cancellation in difference-frequency mixing ==")
for f_ceo_mhz in (0.0, 7.3, 12.0):
    a = CombDescriptor(4e7, f_ceo_mhz * 1e6, env)
    b = CombDescriptor(4e7, f_ceo_mhz * 1e6, env)
    out = dfg_comb(a, b, env)
    print(f"  branch offsets {f_ceo_mhz:5.1f} MHz -> output f_ceo "
          f"{out.f_ceo:.1f} Hz, harmonic: {is_harmonic(out)}")

mixed = dfg_comb(CombDescriptor(4e7, 1.2e7, env), CombDescriptor(4e7, 5e6, env), env)
print(f"  unequal offsets 12 / 5 MHz -> f_ceo {mixed.f_ceo / 1e6:.1f} MHz "
      f"(not harmonic: the branches must share one oscillator)")
