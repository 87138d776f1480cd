"""mircomb: desk-scale model of a difference-frequency mid-infrared comb source.

The package follows the beam path: near-infrared pulses (pulse) feed a
nonlinear fiber (propagation); the pump and the red-shifted continuum
mix in a uniaxial crystal (crystal) to produce a mid-infrared comb
(comb, spectral); the output is read out by an FTIR or dual-comb
spectrometer with a detector noise budget (spectrometer); pipeline wires
the whole chain together and cli exposes it to the shell.
"""

from .spectral import (
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
    wavenumber_to_wavelength,
    write_spectrum_csv,
)
from .comb import CombDescriptor, dfg_comb, is_harmonic, mode_count, power_per_mode, tooth_frequency
from .pulse import (
    ComplexEnvelope,
    TimeGrid,
    apply_chirp,
    duration_fwhm,
    gaussian_pulse,
    sech_pulse,
    to_spectrum,
)
from .propagation import (
    FiberParams,
    StepControl,
    phenomenological_continuum,
    propagate,
    simulate_supercontinuum,
)
from .crystal import (
    PhaseMatchSetting,
    UniaxialCrystal,
    acceptance_fwhm,
    coverage_band,
    default_crystal,
    delta_k,
    dfg_spectrum,
    efficiency,
    external_angle,
    index_e,
    index_e_principal,
    index_o,
    internal_angle,
    load_crystal,
    pm_angle,
)
from .errors import ConfigError, MircombError, NumericsError, PhysicsError

__version__ = "0.1.0"
