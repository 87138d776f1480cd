"""Uniaxial crystal dispersion, birefringent phase matching, and DFG synthesis.

Dispersion data ship in a small JSON document (see data/gase.crystal)
keyed by a formula id, so numeric goldens are pinned to a versioned,
cited coefficient set rather than to constants buried in code. The
interaction type is fixed as type-I with the high-frequency (pump) wave
extraordinary and signal/idler ordinary: in a negative uniaxial crystal
the highest-frequency wave must take the smaller index for collinear
matching. That choice is confined to delta_k().

The mixing model is intensity-level: the mid-infrared output density is
the cross-correlation of the two input densities weighted by the
sinc^2(dk L / 2) phase-matching efficiency, calibrated to a measured
total power. Field-resolved three-wave propagation, walk-off, Fresnel
losses and focusing are intentionally out of scope.
"""

from __future__ import annotations

import dataclasses
import json
import math
import warnings
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import ConfigError, PhysicsError
from .spectral import Band, PowerSpectrum, SpectralGrid


def _n2_power_series_ir_pole(lam_um, c):
    """n^2 = c0 + c1/L^2 + c2/L^4 + c3/L^6 + c4 L^2 / (L^2 - c5), L in um."""
    l2 = np.asarray(lam_um, dtype=float) ** 2
    return c[0] + c[1] / l2 + c[2] / l2**2 + c[3] / l2**3 + c[4] * l2 / (l2 - c[5])


#: registry of supported dispersion formula ids
_FORMULAS = {
    "power_series_ir_pole": _n2_power_series_ir_pole,
}


@dataclass(frozen=True)
class UniaxialCrystal:
    """Dispersion data, thickness and transparency window of a uniaxial crystal."""

    name: str
    formula_id: str
    coefficients_o: tuple
    coefficients_e: tuple
    thickness_mm: float
    transparency: Band  # cm^-1
    uniaxial_sign: str
    source_citation: str = ""

    def __post_init__(self):
        if self.formula_id not in _FORMULAS:
            raise ConfigError(
                f"crystal: unknown dispersion formula id {self.formula_id!r}"
            )
        if not self.thickness_mm > 0:
            raise ValueError(f"thickness must be > 0 mm, got {self.thickness_mm}")
        if self.uniaxial_sign not in ("negative", "positive"):
            raise ValueError("uniaxial_sign must be 'negative' or 'positive'")
        object.__setattr__(self, "coefficients_o", tuple(self.coefficients_o))
        object.__setattr__(self, "coefficients_e", tuple(self.coefficients_e))
        # sanity over the transparency band: indices real, > 1, sign correct
        lam = np.linspace(self.transparency_lo_um * 1.001,
                          self.transparency_hi_um * 0.999, 64)
        no2 = _FORMULAS[self.formula_id](lam, self.coefficients_o)
        ne2 = _FORMULAS[self.formula_id](lam, self.coefficients_e)
        if np.any(no2 <= 1) or np.any(ne2 <= 1):
            raise ValueError(
                f"crystal {self.name}: indices do not stay above 1 over the "
                "transparency band"
            )
        no = np.sqrt(no2)
        ne = np.sqrt(ne2)
        if self.uniaxial_sign == "negative" and not np.all(ne < no):
            raise ValueError(f"crystal {self.name}: n_e >= n_o but sign is negative")
        if self.uniaxial_sign == "positive" and not np.all(ne > no):
            raise ValueError(f"crystal {self.name}: n_e <= n_o but sign is positive")

    @property
    def thickness_cm(self) -> float:
        return self.thickness_mm * 0.1

    @property
    def transparency_lo_um(self) -> float:
        return 1e4 / self.transparency.hi

    @property
    def transparency_hi_um(self) -> float:
        return 1e4 / self.transparency.lo

    def with_thickness(self, thickness_mm: float) -> "UniaxialCrystal":
        return dataclasses.replace(self, thickness_mm=thickness_mm)


@dataclass(frozen=True)
class PhaseMatchSetting:
    """Crystal orientation for one run: external incidence angle in degrees.

    The interaction is always type-I (pump extraordinary, signal and
    idler ordinary). The azimuth is held at the d_eff-maximizing value
    and is informational only; it never enters the phase-match math.
    """

    theta_external: float
    azimuth: float = 30.0
    interaction: str = "type-1"

    def __post_init__(self):
        if not 0 < self.theta_external < 80:
            raise ValueError(
                f"external angle must lie in (0, 80) degrees, got {self.theta_external}"
            )
        if self.interaction != "type-1":
            raise ValueError("only the type-1 interaction is modeled")


def load_crystal(path) -> UniaxialCrystal:
    """Load a crystal data file (JSON key-value document)."""
    with open(path, "rb") as fh:
        raw = json.load(fh)
    return _crystal_from_dict(raw, str(path))


def default_crystal() -> UniaxialCrystal:
    """The bundled 1 mm GaSe crystal."""
    data = resources.files("mircomb.data").joinpath("gase.crystal").read_bytes()
    return _crystal_from_dict(json.loads(data), "bundled gase.crystal")


def _crystal_from_dict(raw: dict, origin: str) -> UniaxialCrystal:
    required = {"name", "formula_id", "coefficients_o", "coefficients_e",
                "transparency_lo_um", "transparency_hi_um", "source_citation"}
    missing = required - raw.keys()
    if missing:
        raise ConfigError(f"{origin}: missing crystal fields {sorted(missing)}")
    lo_um = float(raw["transparency_lo_um"])
    hi_um = float(raw["transparency_hi_um"])
    if not 0 < lo_um < hi_um:
        raise ConfigError(f"{origin}: bad transparency window {lo_um}-{hi_um} um")
    return UniaxialCrystal(
        name=str(raw["name"]),
        formula_id=str(raw["formula_id"]),
        coefficients_o=tuple(float(v) for v in raw["coefficients_o"]),
        coefficients_e=tuple(float(v) for v in raw["coefficients_e"]),
        thickness_mm=float(raw.get("thickness_mm", 1.0)),
        transparency=Band(1e4 / hi_um, 1e4 / lo_um),
        uniaxial_sign=str(raw.get("uniaxial_sign", "negative")),
        source_citation=str(raw["source_citation"]),
    )


def _check_in_band(c: UniaxialCrystal, lam_um, what: str) -> None:
    lam = np.asarray(lam_um, dtype=float)
    lo, hi = c.transparency_lo_um, c.transparency_hi_um
    if np.any(lam < lo) or np.any(lam > hi):
        raise PhysicsError(
            f"crystal.{what}: wavelength outside the {c.name} transparency band "
            f"[{lo:.3g}, {hi:.3g}] um"
        )


def _index_o_raw(c: UniaxialCrystal, lam_um):
    return np.sqrt(_FORMULAS[c.formula_id](lam_um, c.coefficients_o))


def _index_e_raw(c: UniaxialCrystal, lam_um):
    return np.sqrt(_FORMULAS[c.formula_id](lam_um, c.coefficients_e))


def index_o(c: UniaxialCrystal, lam_um):
    """Ordinary refractive index at lam_um (scalar or array)."""
    _check_in_band(c, lam_um, "index_o")
    return _index_o_raw(c, lam_um)


def index_e_principal(c: UniaxialCrystal, lam_um):
    """Principal extraordinary index (propagation at 90 deg to the axis)."""
    _check_in_band(c, lam_um, "index_e_principal")
    return _index_e_raw(c, lam_um)


def index_e(c: UniaxialCrystal, lam_um, theta_internal: float):
    """Extraordinary index at internal angle theta (degrees) to the optic axis:
    1/n^2 = cos^2(theta)/n_o^2 + sin^2(theta)/n_e^2."""
    if not 0 <= theta_internal <= 90:
        raise ValueError(f"theta must lie in [0, 90] degrees, got {theta_internal}")
    _check_in_band(c, lam_um, "index_e")
    th = math.radians(theta_internal)
    no = _index_o_raw(c, lam_um)
    ne = _index_e_raw(c, lam_um)
    return 1.0 / np.sqrt(math.cos(th) ** 2 / no**2 + math.sin(th) ** 2 / ne**2)


def internal_angle(c: UniaxialCrystal, theta_external: float, lam_um: float) -> float:
    """Internal propagation angle (deg) from Snell refraction at the surface.

    Uses the ordinary index for the refraction of both beams; the error
    from the extraordinary beam's slightly different index is below the
    angular tolerances that matter here.
    """
    if not abs(theta_external) < 90:
        raise ValueError(f"|external angle| must be < 90 deg, got {theta_external}")
    n = float(_index_o_raw(c, lam_um))
    return math.degrees(math.asin(math.sin(math.radians(theta_external)) / n))


def external_angle(c: UniaxialCrystal, theta_internal: float, lam_um: float) -> float:
    """Inverse of internal_angle."""
    n = float(_index_o_raw(c, lam_um))
    s = n * math.sin(math.radians(theta_internal))
    if abs(s) >= 1:
        raise PhysicsError(
            f"crystal.external_angle: internal angle {theta_internal} deg is not "
            "reachable from outside the crystal"
        )
    return math.degrees(math.asin(s))


def delta_k(c: UniaxialCrystal, nu_pump: float, nu_idler: float,
            theta_internal: float) -> float:
    """Collinear phase mismatch (rad/cm) for pump -> signal + idler.

    Type-I assignment: pump extraordinary at theta, signal and idler
    ordinary; nu_signal = nu_pump - nu_idler must be positive and all
    three waves must lie within the transparency band.
    """
    nu_signal = nu_pump - nu_idler
    if not nu_signal > 0:
        raise PhysicsError(
            f"crystal.delta_k: idler {nu_idler} cm^-1 must be below pump {nu_pump}"
        )
    lam_p, lam_s, lam_i = 1e4 / nu_pump, 1e4 / nu_signal, 1e4 / nu_idler
    _check_in_band(c, [lam_p, lam_s, lam_i], "delta_k")
    n_p = float(index_e(c, lam_p, theta_internal))
    n_s = float(_index_o_raw(c, lam_s))
    n_i = float(_index_o_raw(c, lam_i))
    return 2.0 * math.pi * (n_p * nu_pump - n_s * nu_signal - n_i * nu_idler)


def pm_angle(c: UniaxialCrystal, nu_pump: float, nu_idler: float) -> float:
    """Internal phase-matching angle (deg): bisection root of delta_k.

    Refines until |delta_k| < 1e-9 rad/cm; raises PhysicsError when no
    sign change exists in (0, 90) degrees.
    """
    f = lambda th: delta_k(c, nu_pump, nu_idler, th)
    a, b = 1e-9, 90.0 - 1e-9
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0:
        raise PhysicsError(
            f"crystal.pm_angle: not phase-matchable for pump {nu_pump:.1f} / "
            f"idler {nu_idler:.1f} cm^-1 in {c.name} (no sign change of delta_k "
            "inside (0, 90) degrees)"
        )
    for _ in range(200):
        m = 0.5 * (a + b)
        if m == a or m == b:
            break
        fm = f(m)
        if fm == 0.0:
            return m
        if fa * fm < 0:
            b, fb = m, fm
        else:
            a, fa = m, fm
    theta = 0.5 * (a + b)
    if abs(f(theta)) >= 1e-9:
        raise PhysicsError(
            f"crystal.pm_angle: bisection stalled at |delta_k| = {abs(f(theta)):.3e} "
            "rad/cm"
        )
    return theta


def efficiency(dk, thickness_cm):
    """Phase-matching efficiency sinc^2(dk * L / 2), dk rad/cm, L cm."""
    if np.any(np.asarray(thickness_cm) <= 0):
        raise ValueError("thickness must be > 0 cm")
    x = np.asarray(dk) * thickness_cm / 2.0
    return np.sinc(x / math.pi) ** 2


def acceptance_fwhm(c: UniaxialCrystal, setting: PhaseMatchSetting,
                    nu_pump: float, nu_idler_center: float) -> float:
    """FWHM (cm^-1) in idler wavenumber of the phase-matching efficiency.

    Evaluated at exact phase matching for (nu_pump, nu_idler_center);
    the setting fixes the interaction type. The width is found by
    walking the actual efficiency curve outward and refining the half
    crossings by bisection, so it stays correct where delta_k curves.
    """
    theta = pm_angle(c, nu_pump, nu_idler_center)
    L = c.thickness_cm

    def eff(nu_i):
        return efficiency(delta_k(c, nu_pump, nu_i, theta), L)

    # local slope gives the walk scale; fall back to 1 cm^-1 if flat
    d = 0.5
    slope = abs(delta_k(c, nu_pump, nu_idler_center + d, theta)
                - delta_k(c, nu_pump, nu_idler_center - d, theta)) / (2 * d)
    est = 2.783 / (L * slope) if slope > 0 else 1.0
    step = max(est / 32.0, 1e-4)

    lo_limit = c.transparency.lo
    hi_limit = min(c.transparency.hi, nu_pump - 1e4 / c.transparency_hi_um)

    def half_point(direction):
        x0, y0 = nu_idler_center, eff(nu_idler_center)
        x1 = x0
        while True:
            x1 = x1 + direction * step
            if not lo_limit < x1 < hi_limit:
                raise PhysicsError(
                    "crystal.acceptance_fwhm: efficiency stays above half maximum "
                    "up to the transparency limit; width is not defined here"
                )
            y1 = eff(x1)
            if y1 < 0.5:
                break
            x0, y0 = x1, y1
        for _ in range(80):
            xm = 0.5 * (x0 + x1)
            if eff(xm) >= 0.5:
                x0 = xm
            else:
                x1 = xm
        return 0.5 * (x0 + x1)

    return half_point(+1.0) - half_point(-1.0)


def dfg_spectrum(pump: PowerSpectrum, sc: PowerSpectrum, c: UniaxialCrystal,
                 setting: PhaseMatchSetting, out_grid: SpectralGrid,
                 power_calibration: float | None = 0.75) -> PowerSpectrum:
    """Mid-infrared difference-frequency spectrum on out_grid.

    S_i(nu_i) = K * integral S_p(nu) S_sc(nu - nu_i)
                sinc^2(delta_k(nu, nu_i; theta_int) L / 2) d nu,

    with theta_int from the setting's external angle refracted at the
    pump peak wavelength, and K chosen so the total output power equals
    power_calibration (mW). power_calibration=None skips the calibration
    and returns the raw conversion product (arbitrary units), which is
    what angle optimizers should rank. Contributions whose signal or
    idler falls outside the transparency band are excluded. An empty
    overlap yields an all-zero spectrum plus a warning.
    """
    if not (400.0 <= out_grid.start and out_grid.stop <= 3000.0):
        raise PhysicsError(
            "crystal.dfg_spectrum: output grid must lie within 400-3000 cm^-1, got "
            f"[{out_grid.start}, {out_grid.stop}]"
        )
    if power_calibration is not None and not power_calibration > 0:
        raise ValueError(f"power_calibration must be > 0 mW, got {power_calibration}")

    pump_peak_um = 1e4 / pump.peak_wavenumber()
    theta_int = internal_angle(c, setting.theta_external, pump_peak_um)
    th = math.radians(theta_int)
    L = c.thickness_cm

    # restrict the pump integration variable to its support
    nu_p_full = pump.wavenumbers()
    sp_full = pump.density
    sel = sp_full > 1e-12 * sp_full.max()
    if sel.any():
        i0, i1 = np.nonzero(sel)[0][[0, -1]]
        nu_p = nu_p_full[i0:i1 + 1]
        sp = sp_full[i0:i1 + 1]
    else:
        nu_p, sp = nu_p_full, sp_full

    nu_i = out_grid.wavenumbers()
    NU_P = nu_p[np.newaxis, :]
    NU_I = nu_i[:, np.newaxis]
    NU_S = NU_P - NU_I

    lam_lo, lam_hi = c.transparency_lo_um, c.transparency_hi_um
    nu_lo, nu_hi = 1e4 / lam_hi, 1e4 / lam_lo
    ok = (
        (NU_S > 0)
        & (NU_S >= nu_lo) & (NU_S <= nu_hi)
        & (NU_P >= nu_lo) & (NU_P <= nu_hi)
        & ((NU_I >= nu_lo) & (NU_I <= nu_hi))
    )

    s_sc = np.interp(NU_S, sc.wavenumbers(), sc.density, left=0.0, right=0.0)

    n_p = 1.0 / np.sqrt(
        math.cos(th) ** 2 / _FORMULAS[c.formula_id](1e4 / nu_p, c.coefficients_o)
        + math.sin(th) ** 2 / _FORMULAS[c.formula_id](1e4 / nu_p, c.coefficients_e)
    )
    # clip wavelengths into the transparency window for safe evaluation;
    # out-of-band contributions are zeroed through the mask anyway
    lam_i_safe = np.clip(1e4 / nu_i, lam_lo, lam_hi)
    n_i = np.sqrt(_FORMULAS[c.formula_id](lam_i_safe, c.coefficients_o))[:, np.newaxis]
    lam_s_safe = np.clip(1e4 / np.maximum(NU_S, 1e-3), lam_lo, lam_hi)
    n_s = np.sqrt(_FORMULAS[c.formula_id](lam_s_safe, c.coefficients_o))

    dk = 2.0 * math.pi * (n_p[np.newaxis, :] * NU_P - n_s * NU_S - n_i * NU_I)
    eff = np.where(ok, np.sinc(dk * L / 2.0 / math.pi) ** 2, 0.0)

    integrand = sp[np.newaxis, :] * np.where(ok, s_sc, 0.0) * eff
    density = np.trapezoid(integrand, dx=pump.grid.step, axis=1)

    total = np.trapezoid(density, dx=out_grid.step)
    if total <= 0:
        warnings.warn(
            "dfg_spectrum: pump and continuum have no phase-matchable overlap; "
            "returning a zero spectrum",
            stacklevel=2,
        )
        return PowerSpectrum(out_grid, np.zeros(out_grid.count))
    if power_calibration is None:
        return PowerSpectrum(out_grid, density)
    return PowerSpectrum(out_grid, density * (power_calibration * 1e3 / total))


def coverage_band(pump_center_um: float, sc_band_um: Band) -> Band:
    """Zero-bandwidth DFG reach (cm^-1) of a pump and a continuum band (um).

    The finite pump and continuum bandwidths widen the real reach beyond
    this band by roughly their own widths.
    """
    if not sc_band_um.lo > pump_center_um:
        raise ValueError(
            "continuum band must lie at longer wavelengths than the pump"
        )
    a = 1e4 / pump_center_um - 1e4 / sc_band_um.lo
    b = 1e4 / pump_center_um - 1e4 / sc_band_um.hi
    lo, hi = min(a, b), max(a, b)
    return Band(lo, hi)
