"""Detector signal-to-noise budget.

With 1 mW spread over 1000 spectral channels and a 10 pW
noise-equivalent-power detector, direct detection reaches S/N = 1e5 per
channel. Interferometric detection against a full-strength reference arm
measures the sample-arm amplitude, so the accessible power dynamic range
is the square of that: 1e10, i.e. a minimum detectable power
transmittance of 1e-10 - enough for highly opaque specimens.
"""

from mircomb.spectrometer import DetectorModel, snr_direct, snr_interferometric

det = DetectorModel(nep=10e-12, integration_time=10e-3)
print(f"detector: NEP {det.nep * 1e12:.0f} pW at {det.integration_time * 1e3:.0f} ms, "
      f"band {1e4 / det.band.hi:.1f}-{1e4 / det.band.lo:.1f} um, "
      f"blocker below {det.blocker_edge} um")

p_channel = 1e-3 / 1000
direct = snr_direct(p_channel, det)
interf = snr_interferometric(p_channel, det)
print(f"\n1 mW over 1000 channels -> {p_channel * 1e6:.0f} uW per channel")
print(f"  direct detection:          S/N = {direct:.3g}")
print(f"  interferometric detection: S/N = {interf:.3g} "
      f"(minimum transmittance {1 / interf:.1g})")

print("\nintegration-time scaling of the noise floor:")
for t_ms in (1.0, 10.0, 100.0, 1000.0):
    print(f"  {t_ms:6.0f} ms: noise {det.noise_rms(t_ms * 1e-3) * 1e12:6.2f} pW, "
          f"direct S/N {p_channel / det.noise_rms(t_ms * 1e-3):.3g}")
