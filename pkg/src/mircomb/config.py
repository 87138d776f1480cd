"""Run-configuration loading: one TOML file, strictly validated.

Unknown keys are rejected rather than ignored, because a silently
misspelled physics parameter is the main way a run goes quietly wrong.
Physical values are validated against the owning module's invariants at
load time, so a bad file fails before any computation starts.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from importlib import resources

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError
from .pipeline import Setting, SourceConfig
from .propagation import FiberParams, StepControl
from .spectral import Band, SpectralGrid, wavelength_to_wavenumber
from .spectrometer import DetectorModel, DualCombConfig


@dataclass(frozen=True)
class FtirConfig:
    opd_max_cm: float = 0.04
    n_samples: int = 4096

    def __post_init__(self):
        if not self.opd_max_cm > 0:
            raise ConfigError(f"opd_max_cm must be > 0, got {self.opd_max_cm}")
        if self.n_samples < 2:
            raise ConfigError(f"n_samples must be >= 2, got {self.n_samples}")


@dataclass(frozen=True)
class DualCombSection:
    delta_f_rep: float = 950.0
    band: Band = Band(990.0, 1010.0)
    frames: int = 100

    def __post_init__(self):
        if not self.delta_f_rep > 0:
            raise ConfigError(f"delta_f_rep must be > 0 Hz, got {self.delta_f_rep}")
        if self.frames < 1:
            raise ConfigError(f"frames must be >= 1, got {self.frames}")


@dataclass(frozen=True)
class RunConfig:
    """Validated contents of one configuration file."""

    source: SourceConfig
    detector: DetectorModel
    dualcomb: DualCombSection
    ftir: FtirConfig

    def dualcomb_config(self) -> DualCombConfig:
        return DualCombConfig(self.source.f_rep, self.dualcomb.delta_f_rep,
                              self.dualcomb.band)


_SCHEMA = {
    "source": {
        "f_rep", "pump_power", "sc_power", "pump_center", "pulse_fwhm",
        "pulse_shape", "power_calibration", "theta_search", "crystal_file",
        "out_grid", "branch_f_ceo",
    },
    "setting": {"label", "sc_center_um", "sc_fwhm_cm", "gdd_s2"},
    "fiber": {
        "length", "beta2", "beta3", "gamma", "alpha", "raman_fraction",
        "raman_tau1", "raman_tau2", "self_steepening",
    },
    "grid": {"n", "dt"},
    "propagation": {"dz", "max_nonlinear_phase_per_step", "hard_step_cap"},
    "detector": {"nep", "integration_time", "band_lo_um", "band_hi_um",
                 "blocker_edge"},
    "dualcomb": {"delta_f_rep", "band_lo_cm", "band_hi_cm", "frames"},
    "ftir": {"opd_max_cm", "n_samples"},
}


def _reject_unknown(section: str, table: dict, allowed: set) -> None:
    unknown = set(table) - allowed
    if unknown:
        raise ConfigError(
            f"config [{section}]: unknown keys {sorted(unknown)}; "
            f"allowed keys are {sorted(allowed)}"
        )


def default_config_text() -> str:
    """The bundled default configuration file contents."""
    return resources.files("mircomb.data").joinpath("default.cfg").read_text()


def load_config(path) -> RunConfig:
    """Parse and validate a TOML run configuration."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err}") from err
    return parse_config(raw, origin=str(path))


def parse_config(raw: bytes, origin: str = "<config>") -> RunConfig:
    try:
        doc = tomllib.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, tomllib.TOMLDecodeError) as err:
        raise ConfigError(f"{origin}: not valid TOML: {err}") from err

    known_sections = {"source", "fiber", "grid", "propagation", "detector",
                      "dualcomb", "ftir"}
    _reject_unknown("top level", doc, known_sections)

    try:
        return RunConfig(
            source=_parse_source(doc),
            detector=_parse_detector(doc.get("detector", {})),
            dualcomb=_parse_dualcomb(doc.get("dualcomb", {})),
            ftir=_parse_ftir(doc.get("ftir", {})),
        )
    except ConfigError:
        raise
    except (TypeError, ValueError) as err:
        raise ConfigError(f"{origin}: {err}") from err


def _parse_source(doc: dict) -> SourceConfig:
    src = dict(doc.get("source", {}))
    settings_raw = src.pop("setting", None)
    _reject_unknown("source", src, _SCHEMA["source"] - {"setting"})
    if not settings_raw:
        raise ConfigError("config: at least one [[source.setting]] is required")

    table = []
    for i, entry in enumerate(settings_raw):
        _reject_unknown(f"source.setting[{i}]", entry, _SCHEMA["setting"])
        if "label" not in entry:
            raise ConfigError(f"config [source.setting[{i}]]: label is required")
        table.append(Setting(
            label=str(entry["label"]),
            sc_center_um=entry.get("sc_center_um"),
            sc_fwhm_cm=entry.get("sc_fwhm_cm"),
            gdd_s2=entry.get("gdd_s2"),
        ))

    kwargs = {}
    if "theta_search" in src:
        ts = src.pop("theta_search")
        if not (isinstance(ts, list) and len(ts) == 2):
            raise ConfigError("config [source]: theta_search must be [lo, hi] degrees")
        kwargs["theta_search"] = Band(float(ts[0]), float(ts[1]))
    if "out_grid" in src:
        og = src.pop("out_grid")
        if not (isinstance(og, list) and len(og) == 3):
            raise ConfigError("config [source]: out_grid must be [lo, hi, step] cm^-1")
        lo, hi, step = map(float, og)
        count = int(round((hi - lo) / step)) + 1
        kwargs["out_grid"] = SpectralGrid(lo, step, count)
    if "crystal_file" in src:
        cf = src.pop("crystal_file")
        kwargs["crystal_file"] = str(cf) if cf else None
    for key in ("f_rep", "pump_power", "sc_power", "pump_center", "pulse_fwhm",
                "power_calibration", "branch_f_ceo"):
        if key in src:
            kwargs[key] = float(src.pop(key))
    if "pulse_shape" in src:
        kwargs["pulse_shape"] = str(src.pop("pulse_shape"))

    grid = dict(doc.get("grid", {}))
    _reject_unknown("grid", grid, _SCHEMA["grid"])
    if "n" in grid:
        kwargs["grid_n"] = int(grid["n"])
    if "dt" in grid:
        kwargs["grid_dt"] = float(grid["dt"])

    if "fiber" in doc:
        fib = dict(doc["fiber"])
        _reject_unknown("fiber", fib, _SCHEMA["fiber"])
        if "length" not in fib or "beta2" not in fib:
            raise ConfigError("config [fiber]: length and beta2 are required")
        kwargs["fiber"] = FiberParams(**fib)

    if "propagation" in doc:
        prop = dict(doc["propagation"])
        _reject_unknown("propagation", prop, _SCHEMA["propagation"])
        kwargs["step_control"] = StepControl(**prop)

    return SourceConfig(setting_table=tuple(table), **kwargs)


def _parse_detector(table: dict) -> DetectorModel:
    _reject_unknown("detector", table, _SCHEMA["detector"])
    kwargs = {}
    if "nep" in table:
        kwargs["nep"] = float(table["nep"])
    if "integration_time" in table:
        kwargs["integration_time"] = float(table["integration_time"])
    if "blocker_edge" in table:
        kwargs["blocker_edge"] = float(table["blocker_edge"])
    if ("band_lo_um" in table) != ("band_hi_um" in table):
        raise ConfigError("config [detector]: band_lo_um and band_hi_um go together")
    if "band_lo_um" in table:
        lo_um = float(table["band_lo_um"])
        hi_um = float(table["band_hi_um"])
        kwargs["band"] = Band(wavelength_to_wavenumber(hi_um),
                              wavelength_to_wavenumber(lo_um))
    return DetectorModel(**kwargs)


def _parse_dualcomb(table: dict) -> DualCombSection:
    _reject_unknown("dualcomb", table, _SCHEMA["dualcomb"])
    kwargs = {}
    if "delta_f_rep" in table:
        kwargs["delta_f_rep"] = float(table["delta_f_rep"])
    if ("band_lo_cm" in table) != ("band_hi_cm" in table):
        raise ConfigError("config [dualcomb]: band_lo_cm and band_hi_cm go together")
    if "band_lo_cm" in table:
        kwargs["band"] = Band(float(table["band_lo_cm"]), float(table["band_hi_cm"]))
    if "frames" in table:
        kwargs["frames"] = int(table["frames"])
    return DualCombSection(**kwargs)


def _parse_ftir(table: dict) -> FtirConfig:
    _reject_unknown("ftir", table, _SCHEMA["ftir"])
    kwargs = {}
    if "opd_max_cm" in table:
        kwargs["opd_max_cm"] = float(table["opd_max_cm"])
    if "n_samples" in table:
        kwargs["n_samples"] = int(table["n_samples"])
    return FtirConfig(**kwargs)
