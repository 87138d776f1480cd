"""End-to-end source pipeline: laser setting -> continuum -> DFG -> report.

One run walks the experiment for every entry of the setting table:
build the pump spectrum from the pulse parameters, build the continuum
(nonlinear-fiber model or the phenomenological bypass), pick the crystal
angle inside the search window that maximizes the power-sensor reading
of the mixed output, and summarize the mid-infrared spectrum. Settings
are independent and the report preserves table order, so results do not
depend on evaluation order.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import comb as comb_mod
from . import crystal as crystal_mod
from . import propagation, pulse, spectral
from .errors import ConfigError, MircombError
from .spectral import Band, PowerSpectrum, SpectralGrid
from .spectrometer import DetectorModel, sensor_reading

#: Gaussian pulse: peak power = energy / (t_fwhm * sqrt(pi / (4 ln 2)))
_GAUSS_ENERGY_FACTOR = math.sqrt(math.pi / (4.0 * math.log(2.0)))


@dataclass(frozen=True)
class Setting:
    """One laser setting: a labeled continuum recipe.

    Exactly one route must be configured: a phenomenological continuum
    (sc_center_um + sc_fwhm_cm) or a fiber run (gdd_s2 pre-chirp).
    """

    label: str
    sc_center_um: float | None = None
    sc_fwhm_cm: float | None = None
    gdd_s2: float | None = None

    def __post_init__(self):
        phenom = self.sc_center_um is not None or self.sc_fwhm_cm is not None
        if phenom and (self.sc_center_um is None or self.sc_fwhm_cm is None):
            raise ConfigError(
                f"setting {self.label!r}: sc_center_um and sc_fwhm_cm go together"
            )
        if phenom == (self.gdd_s2 is not None):
            raise ConfigError(
                f"setting {self.label!r}: configure either sc_center_um/sc_fwhm_cm "
                "or gdd_s2, not both"
            )

    @property
    def is_phenomenological(self) -> bool:
        return self.sc_center_um is not None


@dataclass(frozen=True)
class SourceConfig:
    """Everything needed to run the source end of the experiment."""

    setting_table: tuple
    f_rep: float = 4.0e7             # Hz
    pump_power: float = 360.0        # mW quasi-cw in the pump branch
    sc_power: float = 160.0          # mW quasi-cw in the continuum branch
    pump_center: float = 1.55        # um
    pulse_fwhm: float = 100e-15      # s
    pulse_shape: str = "gaussian"
    crystal_file: str | None = None  # None selects the bundled GaSe
    theta_search: Band = Band(30.0, 43.0)   # external angle window, degrees
    power_calibration: float = 0.75  # mW total mid-infrared output
    out_grid: SpectralGrid = SpectralGrid(420.0, 2.0, 1281)
    grid_n: int = 8192
    grid_dt: float = 2.5e-15
    fiber: propagation.FiberParams | None = None
    step_control: propagation.StepControl = propagation.StepControl()
    branch_f_ceo: float = 1.2e7      # oscillator offset carried by both branches

    def __post_init__(self):
        if not self.setting_table:
            raise ConfigError("setting table must not be empty")
        object.__setattr__(self, "setting_table", tuple(self.setting_table))
        labels = [s.label for s in self.setting_table]
        if len(set(labels)) != len(labels):
            raise ConfigError(f"duplicate setting labels in {labels}")
        for p, name in ((self.f_rep, "f_rep"), (self.pump_power, "pump_power"),
                        (self.sc_power, "sc_power"), (self.power_calibration,
                        "power_calibration"), (self.pulse_fwhm, "pulse_fwhm")):
            if not p > 0:
                raise ConfigError(f"{name} must be > 0, got {p}")
        if self.pulse_shape not in ("gaussian", "sech"):
            raise ConfigError(f"pulse_shape must be gaussian or sech, got {self.pulse_shape}")
        if any(s.gdd_s2 is not None for s in self.setting_table) and self.fiber is None:
            raise ConfigError("gdd settings require a [fiber] section")

    def labels(self) -> list:
        return [s.label for s in self.setting_table]

    def setting(self, label: str) -> Setting:
        for s in self.setting_table:
            if s.label == label:
                return s
        raise ConfigError(f"unknown setting label {label!r}; have {self.labels()}")

    def crystal(self) -> crystal_mod.UniaxialCrystal:
        if self.crystal_file:
            return crystal_mod.load_crystal(self.crystal_file)
        return crystal_mod.default_crystal()


@dataclass(frozen=True)
class SettingReport:
    """Summary of one setting; every scalar is recomputable from `spectrum`."""

    label: str
    spectrum: PowerSpectrum = field(repr=False)
    theta_external: float
    peak_cm: float
    fwhm_cm: float
    usable: Band
    octave: bool
    mode_count: int
    power_per_mode_w: float
    sensor_w: float


@dataclass(frozen=True)
class RunReport:
    """Per-setting reports (table order) plus the mid-infrared comb metadata."""

    entries: tuple
    f_rep: float
    f_ceo: float

    def entry(self, label: str) -> SettingReport:
        for e in self.entries:
            if e.label == label:
                return e
        raise KeyError(label)

    def usable_hull(self) -> Band:
        """Extent of the tuning coverage: envelope of all usable bands."""
        return Band(min(e.usable.lo for e in self.entries),
                    max(e.usable.hi for e in self.entries))

    def usable_union(self) -> tuple:
        """Merged usable bands, ascending and disjoint."""
        ivs = sorted((e.usable.lo, e.usable.hi) for e in self.entries)
        merged = [list(ivs[0])]
        for lo, hi in ivs[1:]:
            if lo <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        return tuple(Band(lo, hi) for lo, hi in merged)


def pump_spectrum(cfg: SourceConfig) -> PowerSpectrum:
    """Quasi-cw pump spectrum from the configured pulse parameters."""
    return pulse.to_spectrum(pump_envelope(cfg), cfg.pump_power, cfg.f_rep)


def pump_envelope(cfg: SourceConfig) -> pulse.ComplexEnvelope:
    grid = pulse.TimeGrid(cfg.grid_n, cfg.grid_dt)
    energy = cfg.pump_power * 1e-3 / cfg.f_rep
    if cfg.pulse_shape == "gaussian":
        p_peak = energy / (cfg.pulse_fwhm * _GAUSS_ENERGY_FACTOR)
        return pulse.gaussian_pulse(cfg.pulse_fwhm, p_peak, cfg.pump_center, grid)
    t0 = cfg.pulse_fwhm / pulse.SECH_FWHM_OVER_T0
    p0 = energy / (2.0 * t0)
    return pulse.sech_pulse(t0, p0, cfg.pump_center, grid)


def sc_envelope(cfg: SourceConfig) -> pulse.ComplexEnvelope:
    """Seed pulse of the continuum branch (same oscillator, sc branch energy)."""
    grid = pulse.TimeGrid(cfg.grid_n, cfg.grid_dt)
    energy = cfg.sc_power * 1e-3 / cfg.f_rep
    if cfg.pulse_shape == "gaussian":
        p_peak = energy / (cfg.pulse_fwhm * _GAUSS_ENERGY_FACTOR)
        return pulse.gaussian_pulse(cfg.pulse_fwhm, p_peak, cfg.pump_center, grid)
    t0 = cfg.pulse_fwhm / pulse.SECH_FWHM_OVER_T0
    p0 = energy / (2.0 * t0)
    return pulse.sech_pulse(t0, p0, cfg.pump_center, grid)


def continuum_spectrum(cfg: SourceConfig, setting: Setting) -> PowerSpectrum:
    if setting.is_phenomenological:
        return propagation.phenomenological_continuum(
            setting.sc_center_um, setting.sc_fwhm_cm, cfg.sc_power)
    return propagation.simulate_supercontinuum(
        sc_envelope(cfg), cfg.fiber, setting.gdd_s2,
        sc_power_mw=cfg.sc_power, f_rep=cfg.f_rep, ctl=cfg.step_control)


def _golden_max(f, a: float, b: float, tol: float = 1e-3):
    """Deterministic golden-section maximization on [a, b]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def optimize_theta(pump: PowerSpectrum, sc: PowerSpectrum,
                   crystal: crystal_mod.UniaxialCrystal, cfg: SourceConfig,
                   detector: DetectorModel | None = None,
                   objective: str = "sensor"):
    """Best external angle in the search window: 0.1 deg grid + golden refine.

    objective 'sensor' maximizes the power-sensor reading of the raw
    (uncalibrated) output, which is the knob the experiment turns; 'peak'
    maximizes the raw output peak density. The returned spectrum is the
    calibrated output at the chosen angle: (theta_external, spectrum).
    """
    if detector is None:
        detector = DetectorModel()
    if objective not in ("sensor", "peak"):
        raise ConfigError(f"unknown objective {objective!r}")

    def evaluate(theta_ext: float):
        raw = crystal_mod.dfg_spectrum(
            pump, sc, crystal, crystal_mod.PhaseMatchSetting(theta_ext),
            cfg.out_grid, None)
        if objective == "sensor":
            return sensor_reading(raw, detector)
        return float(raw.density.max())

    lo, hi = cfg.theta_search.lo, cfg.theta_search.hi
    grid = np.arange(lo, hi + 1e-9, 0.1)
    scores = np.array([evaluate(float(th)) for th in grid])
    best = int(np.argmax(scores))
    a = float(grid[max(best - 1, 0)])
    b = float(grid[min(best + 1, len(grid) - 1)])
    theta, _ = _golden_max(evaluate, a, b)
    spectrum = crystal_mod.dfg_spectrum(
        pump, sc, crystal, crystal_mod.PhaseMatchSetting(theta),
        cfg.out_grid, cfg.power_calibration)
    return theta, spectrum


def run_setting(cfg: SourceConfig, label: str, objective: str = "sensor",
                detector: DetectorModel | None = None) -> SettingReport:
    """Run one labeled setting and fill every report field."""
    setting = cfg.setting(label)
    if detector is None:
        detector = DetectorModel()
    try:
        pump = pump_spectrum(cfg)
        sc = continuum_spectrum(cfg, setting)
        crystal = cfg.crystal()
        theta, out = optimize_theta(pump, sc, crystal, cfg, detector, objective)
        peak = out.peak_wavenumber()
        width = spectral.fwhm(out)
        usable = spectral.usable_width(out, 0.1)
        mid_comb = midir_comb(cfg, out)
        return SettingReport(
            label=label,
            spectrum=out,
            theta_external=theta,
            peak_cm=peak,
            fwhm_cm=width,
            usable=usable,
            octave=spectral.is_octave(usable),
            mode_count=comb_mod.mode_count(mid_comb, usable),
            power_per_mode_w=comb_mod.power_per_mode(out, cfg.f_rep, peak),
            sensor_w=sensor_reading(out, detector),
        )
    except MircombError as err:
        raise type(err)(f"[setting {label!r}] {err}") from err


def midir_comb(cfg: SourceConfig, envelope: PowerSpectrum) -> comb_mod.CombDescriptor:
    """Mid-infrared comb: both branches share the oscillator offset, so the
    difference-frequency output is harmonic."""
    branch_a = comb_mod.CombDescriptor(cfg.f_rep, cfg.branch_f_ceo, envelope)
    branch_b = comb_mod.CombDescriptor(cfg.f_rep, cfg.branch_f_ceo, envelope)
    return comb_mod.dfg_comb(branch_a, branch_b, envelope)


def tuning_scan(cfg: SourceConfig, objective: str = "sensor",
                detector: DetectorModel | None = None) -> RunReport:
    """run_setting over the whole table, in table order."""
    entries = tuple(run_setting(cfg, lb, objective, detector) for lb in cfg.labels())
    sample = midir_comb(cfg, entries[0].spectrum)
    return RunReport(entries=entries, f_rep=sample.f_rep, f_ceo=sample.f_ceo)


def thickness_study(cfg: SourceConfig, thicknesses_mm, label: str | None = None,
                    objective: str = "sensor"):
    """Usable width versus crystal thickness at one fixed setting.

    The setting defaults to the one with the widest usable band at the
    configured thickness. The angle is re-optimized for each thickness,
    mirroring how the crystal is re-tweaked in practice. Returns a list
    of (thickness_mm, usable_width_cm, fwhm_cm) rows in input order.
    """
    if not thicknesses_mm:
        raise ConfigError("thickness list must not be empty")
    if label is None:
        base = tuning_scan(cfg, objective)
        label = max(base.entries, key=lambda e: e.usable.width).label
    setting = cfg.setting(label)
    pump = pump_spectrum(cfg)
    sc = continuum_spectrum(cfg, setting)
    base_crystal = cfg.crystal()
    rows = []
    for t_mm in thicknesses_mm:
        crystal = base_crystal.with_thickness(float(t_mm))
        _, out = optimize_theta(pump, sc, crystal, cfg)
        usable = spectral.usable_width(out, 0.1)
        rows.append((float(t_mm), usable.width, spectral.fwhm(out)))
    return rows


# ---------------------------------------------------------------- output --

REPORT_COLUMNS = (
    "label,theta_external_deg,peak_cm-1,fwhm_cm-1,usable_lo_cm-1,usable_hi_cm-1,"
    "usable_width_cm-1,is_octave,mode_count,power_per_mode_w,sensor_w"
)


def atomic_write_text(path, text: str) -> None:
    """Write text to path atomically (temp file + rename)."""
    tmp = f"{path}.tmp"
    with open(tmp, "w", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def report_csv_text(report: RunReport) -> str:
    lines = [REPORT_COLUMNS]
    for e in report.entries:
        lines.append(
            f"{e.label},{e.theta_external:.17g},{e.peak_cm:.17g},{e.fwhm_cm:.17g},"
            f"{e.usable.lo:.17g},{e.usable.hi:.17g},{e.usable.width:.17g},"
            f"{int(e.octave)},{e.mode_count},{e.power_per_mode_w:.17g},"
            f"{e.sensor_w:.17g}"
        )
    return "\n".join(lines) + "\n"


def write_report(report: RunReport, out_dir, seed: int | None = None) -> list:
    """Write report.csv, one spectrum CSV per setting, and manifest.json.

    Returns the list of written paths. All writes are atomic.
    """
    os.makedirs(out_dir, exist_ok=True)
    written = []

    path = os.path.join(out_dir, "report.csv")
    atomic_write_text(path, report_csv_text(report))
    written.append(path)

    for e in report.entries:
        spath = os.path.join(out_dir, f"spectrum_{e.label}.csv")
        x = e.spectrum.wavenumbers()
        rows = ["wavenumber_cm-1,density_uW_per_cm-1"]
        rows += [f"{xi:.17g},{di:.17g}" for xi, di in zip(x, e.spectrum.density)]
        atomic_write_text(spath, "\n".join(rows) + "\n")
        written.append(spath)

    hull = report.usable_hull()
    manifest = {
        "f_rep_hz": repr(report.f_rep),
        "f_ceo_hz": repr(report.f_ceo),
        "settings": [e.label for e in report.entries],
        "usable_hull_cm": [hull.lo, hull.hi],
        "usable_union_cm": [[b.lo, b.hi] for b in report.usable_union()],
    }
    if seed is not None:
        manifest["seed"] = seed
    mpath = os.path.join(out_dir, "manifest.json")
    atomic_write_text(mpath, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    written.append(mpath)
    return written
