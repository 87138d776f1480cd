"""Command-line front end.

Each subcommand fronts one module operation or the full pipeline. All
physics comes from the library; the CLI only parses flags, loads the
configuration, writes CSVs (atomically), and prints one-line summaries.
Plot files are SVG renderings of the CSVs just written, never an
independent computation.

Exit codes: 0 success, 2 configuration error, 3 physics-domain error,
4 numerical-guard abort.
"""

import argparse
import os
import sys

import numpy as np

from . import __version__
from .comb import CombDescriptor, mode_count
from .config import RunConfig, default_config_text, load_config, parse_config
from .crystal import (
    PhaseMatchSetting,
    acceptance_fwhm,
    default_crystal,
    external_angle,
    load_crystal,
    pm_angle,
)
from .errors import ConfigError, NumericsError, PhysicsError
from .pipeline import (
    atomic_write_text,
    run_setting,
    thickness_study,
    tuning_scan,
    write_report,
)
from .propagation import simulate_supercontinuum
from .spectral import (
    Band,
    C_CM_PER_S,
    fwhm,
    is_octave,
    read_spectrum_csv,
    total_power,
    usable_width,
    wavelength_to_wavenumber,
    wavenumber_to_frequency,
)
from .spectrometer import (
    DetectorModel,
    dualcomb_nyquist_bandwidth,
    ftir_resolution,
    interferogram_from_spectrum,
    read_gas_csv,
    simulate_dualcomb,
    snr_direct,
    snr_interferometric,
    spectrum_from_interferogram,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PHYSICS = 3
EXIT_NUMERICS = 4


def _spectrum_csv_text(s) -> str:
    rows = ["wavenumber_cm-1,density_uW_per_cm-1"]
    rows += [f"{x:.17g},{d:.17g}" for x, d in zip(s.wavenumbers(), s.density)]
    return "\n".join(rows) + "\n"


def _interferogram_csv_text(i) -> str:
    label = "opd_cm" if i.axis_kind == "opd" else "time_s"
    rows = [f"{label},intensity_w"]
    rows += [f"{x:.17g},{y:.17g}" for x, y in zip(i.axis(), i.samples)]
    return "\n".join(rows) + "\n"


def write_svg_plot(csv_path, svg_path, title: str = "") -> None:
    """Render a two-column CSV as a simple SVG polyline (derived view)."""
    data = np.loadtxt(csv_path, delimiter=",", skiprows=1, ndmin=2)
    with open(csv_path) as fh:
        xlabel, ylabel = fh.readline().strip().split(",")[:2]
    x, y = data[:, 0], data[:, 1]
    w, h, pad = 720, 400, 50
    xr = (x.min(), x.max() if x.max() > x.min() else x.min() + 1)
    yr = (0.0, y.max() if y.max() > 0 else 1.0)
    px = pad + (x - xr[0]) / (xr[1] - xr[0]) * (w - 2 * pad)
    py = h - pad - (y - yr[0]) / (yr[1] - yr[0]) * (h - 2 * pad)
    # thin out very long traces; the CSV keeps full fidelity
    step = max(1, len(px) // 4000)
    points = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px[::step], py[::step]))
    svg = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}">\n'
        f'<rect width="{w}" height="{h}" fill="white"/>\n'
        f'<polyline points="{points}" fill="none" stroke="#c03030" stroke-width="1"/>\n'
        f'<line x1="{pad}" y1="{h-pad}" x2="{w-pad}" y2="{h-pad}" stroke="black"/>\n'
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{h-pad}" stroke="black"/>\n'
        f'<text x="{w//2}" y="{h-12}" text-anchor="middle" font-size="13">{xlabel}'
        f' (min {xr[0]:.6g}, max {xr[1]:.6g})</text>\n'
        f'<text x="16" y="{h//2}" font-size="13" transform="rotate(-90 16 {h//2})"'
        f' text-anchor="middle">{ylabel} (max {yr[1]:.6g})</text>\n'
        f'<text x="{w//2}" y="24" text-anchor="middle" font-size="14">{title}</text>\n'
        "</svg>\n"
    )
    atomic_write_text(svg_path, svg)


def _write_spectrum(s, out_dir, name, plot=False, title=""):
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    atomic_write_text(path, _spectrum_csv_text(s))
    if plot:
        write_svg_plot(path, path[:-4] + ".svg", title)
    return path


def _summary(s) -> str:
    try:
        width = fwhm(s)
        band = usable_width(s, 0.1)
        extra = (f"fwhm {width:.1f} cm^-1, usable [{band.lo:.1f}, {band.hi:.1f}]"
                 f" ({band.width:.1f} cm^-1, octave {is_octave(band)})")
    except PhysicsError:
        extra = "degenerate spectrum (no usable width)"
    return (f"peak {s.peak_wavenumber():.1f} cm^-1, {extra}, "
            f"power {total_power(s) / 1e3:.4g} mW")


def _load(args) -> RunConfig:
    if args.config:
        return load_config(args.config)
    return parse_config(default_config_text().encode(), origin="<bundled default>")


# ------------------------------------------------------------ subcommands --

def cmd_units(args) -> int:
    if args.wavenumber is None and args.wavelength_um is None:
        raise ConfigError("units: give --wavenumber and/or --wavelength-um")
    if args.wavenumber is not None:
        nu = args.wavenumber
        print(f"{nu} cm^-1 = {wavenumber_to_frequency(nu):.10e} Hz"
              f" = {1e4 / nu:.6f} um")
    if args.wavelength_um is not None:
        lam = args.wavelength_um
        nu = wavelength_to_wavenumber(lam)
        print(f"{lam} um = {nu:.6f} cm^-1 = {wavenumber_to_frequency(nu):.10e} Hz")
    return EXIT_OK


def _parse_band(text: str) -> Band:
    """Either 'lo:hi' in cm^-1 or a bare width anchored at 600 cm^-1."""
    if ":" in text:
        lo, hi = (float(v) for v in text.split(":", 1))
        return Band(lo, hi)
    width = float(text)
    return Band(600.0, 600.0 + width)


def cmd_comb(args) -> int:
    band = _parse_band(args.band)
    f_rep = args.frep_mhz * 1e6
    f_ceo = args.fceo_mhz * 1e6
    from .spectral import PowerSpectrum, SpectralGrid
    env = PowerSpectrum(SpectralGrid(band.lo, band.width / 16 or 1.0, 17),
                        np.ones(17))
    comb = CombDescriptor(f_rep, f_ceo, env)
    count = mode_count(comb, band)
    print(f"band [{band.lo:.4g}, {band.hi:.4g}] cm^-1 at f_rep {f_rep:.6g} Hz, "
          f"f_ceo {f_ceo:.6g} Hz: {count} modes, harmonic={f_ceo == 0.0}")
    return EXIT_OK


def cmd_pm(args) -> int:
    crystal = load_crystal(args.crystal) if args.crystal else default_crystal()
    if args.thickness_mm:
        crystal = crystal.with_thickness(args.thickness_mm)
    theta_int = pm_angle(crystal, args.pump_cm, args.idler_cm)
    theta_ext = external_angle(crystal, theta_int, 1e4 / args.pump_cm)
    acc = acceptance_fwhm(crystal, PhaseMatchSetting(max(theta_ext, 1e-3)),
                          args.pump_cm, args.idler_cm)
    print(f"pump {args.pump_cm:.2f} / idler {args.idler_cm:.2f} cm^-1 in "
          f"{crystal.name} ({crystal.thickness_mm} mm): internal {theta_int:.3f} deg, "
          f"external {theta_ext:.3f} deg, acceptance fwhm {acc:.2f} cm^-1")
    return EXIT_OK


def cmd_sc(args) -> int:
    cfg = _load(args)
    src = cfg.source
    if src.fiber is None:
        raise ConfigError("sc: the configuration has no [fiber] section")
    from .pipeline import sc_envelope
    gdd = args.gdd_fs2 * 1e-30 if args.gdd_fs2 is not None else 0.0
    s = simulate_supercontinuum(sc_envelope(src), src.fiber, gdd,
                                sc_power_mw=src.sc_power, f_rep=src.f_rep,
                                ctl=src.step_control)
    path = _write_spectrum(s, args.out, "supercontinuum.csv", args.plot,
                           f"supercontinuum, gdd {gdd:.3g} s^2")
    print(f"sc: {_summary(s)} -> {path}")
    return EXIT_OK


def cmd_dfg(args) -> int:
    cfg = _load(args)
    src = cfg.source
    label = args.setting or src.labels()[0]
    report = run_setting(src, label, objective=args.objective)
    path = _write_spectrum(report.spectrum, args.out, f"dfg_{label}.csv", args.plot,
                           f"mid-infrared output, setting {label}")
    print(f"dfg {label}: theta_ext {report.theta_external:.2f} deg, "
          f"{_summary(report.spectrum)} -> {path}")
    return EXIT_OK


def cmd_ftir(args) -> int:
    cfg = _load(args)
    s = read_spectrum_csv(args.input)
    opd = args.opd_max_cm or cfg.ftir.opd_max_cm
    n = args.samples or cfg.ftir.n_samples
    ifg = interferogram_from_spectrum(s, opd, n)
    os.makedirs(args.out, exist_ok=True)
    ipath = os.path.join(args.out, "interferogram.csv")
    atomic_write_text(ipath, _interferogram_csv_text(ifg))
    rec = spectrum_from_interferogram(ifg, args.apodization)
    rpath = _write_spectrum(rec, args.out, "recovered.csv", args.plot,
                            "FTIR recovered spectrum")
    if args.plot:
        write_svg_plot(ipath, ipath[:-4] + ".svg", "interferogram")
    res = ftir_resolution(opd)
    print(f"ftir: opd_max {opd} cm ({n} samples), resolution {res:.4g} cm^-1 "
          f"-> {ipath}, {rpath}")
    return EXIT_OK


def cmd_dualcomb(args) -> int:
    cfg = _load(args)
    dc = cfg.dualcomb_config()
    if args.input:
        s = read_spectrum_csv(args.input)
    else:
        label = args.setting or cfg.source.labels()[0]
        s = run_setting(cfg.source, label).spectrum
    gas = read_gas_csv(args.gas) if args.gas else None
    frames = args.frames or cfg.dualcomb.frames
    ifg, rec = simulate_dualcomb(s, gas, dc, frames, cfg.detector, args.seed)
    os.makedirs(args.out, exist_ok=True)
    ipath = os.path.join(args.out, "dualcomb_interferogram.csv")
    atomic_write_text(ipath, _interferogram_csv_text(ifg))
    rpath = _write_spectrum(rec, args.out, "dualcomb_recovered.csv", args.plot,
                            "dual-comb recovered spectrum")
    nyq = dualcomb_nyquist_bandwidth(dc)
    print(f"dualcomb: frame rate {dc.frame_rate:.6g} /s, compression "
          f"{dc.compression_factor:.6g}, alias-free span {nyq / C_CM_PER_S:.4g} "
          f"cm^-1, {frames} frames, seed {args.seed} -> {ipath}, {rpath}")
    return EXIT_OK


def cmd_snr(args) -> int:
    det = DetectorModel(nep=args.nep_pw * 1e-12)
    p_channel = args.power_mw * 1e-3 / args.channels
    direct = snr_direct(p_channel, det)
    interf = snr_interferometric(p_channel, det)
    print(f"per-channel power {p_channel:.4g} W at NEP {det.nep:.4g} W: "
          f"snr_direct = {direct:.4g}, snr_interferometric = {interf:.4g}")
    return EXIT_OK


def cmd_pipeline(args) -> int:
    cfg = _load(args)
    report = tuning_scan(cfg.source, objective=args.objective,
                         detector=cfg.detector)
    written = write_report(report, args.out, seed=args.seed)
    if args.plot:
        for path in written:
            if os.path.basename(path).startswith("spectrum_"):
                write_svg_plot(path, path[:-4] + ".svg",
                               os.path.basename(path)[:-4])
    for e in report.entries:
        print(f"{e.label}: theta_ext {e.theta_external:.2f} deg, peak "
              f"{e.peak_cm:.1f} cm^-1, fwhm {e.fwhm_cm:.1f}, usable "
              f"[{e.usable.lo:.1f}, {e.usable.hi:.1f}] ({e.usable.width:.1f} cm^-1), "
              f"octave {e.octave}, {e.mode_count} modes, "
              f"{e.power_per_mode_w * 1e9:.3g} nW/mode, sensor "
              f"{e.sensor_w * 1e3:.3g} mW")
    hull = report.usable_hull()
    print(f"pipeline: {len(report.entries)} settings, usable coverage hull "
          f"[{hull.lo:.1f}, {hull.hi:.1f}] cm^-1, f_ceo {report.f_ceo:.6g} Hz "
          f"-> {os.path.join(args.out, 'report.csv')}")
    return EXIT_OK


def cmd_thickness(args) -> int:
    cfg = _load(args)
    rows = thickness_study(cfg.source, args.thickness_mm, label=args.setting)
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "thickness_study.csv")
    text = "thickness_mm,usable_width_cm-1,fwhm_cm-1\n" + "".join(
        f"{t:.17g},{w:.17g},{f:.17g}\n" for t, w, f in rows)
    atomic_write_text(path, text)
    for t, w, f in rows:
        print(f"thickness {t:g} mm: usable width {w:.1f} cm^-1, fwhm {f:.1f} cm^-1")
    print(f"thickness: {len(rows)} rows -> {path}")
    return EXIT_OK


# ---------------------------------------------------------------- parser --

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mircomb",
        description="Desk-scale model of a difference-frequency mid-infrared "
                    "comb source with FTIR and dual-comb readout.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out=True):
        p.add_argument("--config", help="TOML run configuration (default: bundled)")
        if out:
            p.add_argument("--out", default="out", help="output directory")
            p.add_argument("--plot", action="store_true",
                           help="also write SVG plots of the CSVs")
        p.add_argument("--seed", type=int, default=0, help="noise seed")

    p = sub.add_parser("units", help="convert wavenumber/wavelength/frequency")
    p.add_argument("--wavenumber", type=float, help="value in cm^-1")
    p.add_argument("--wavelength-um", type=float, help="value in um")
    p.set_defaults(func=cmd_units)

    p = sub.add_parser("comb", help="comb tooth counting and harmonicity")
    p.add_argument("--band", required=True,
                   help="'lo:hi' in cm^-1, or a width anchored at 600 cm^-1")
    p.add_argument("--frep-mhz", type=float, default=40.0)
    p.add_argument("--fceo-mhz", type=float, default=0.0)
    p.set_defaults(func=cmd_comb)

    p = sub.add_parser("pm", help="phase-matching angle and acceptance")
    p.add_argument("--pump-cm", type=float, default=1e4 / 1.55)
    p.add_argument("--idler-cm", type=float, required=True)
    p.add_argument("--crystal", help="crystal data file (default: bundled GaSe)")
    p.add_argument("--thickness-mm", type=float)
    p.set_defaults(func=cmd_pm)

    p = sub.add_parser("sc", help="nonlinear-fiber supercontinuum")
    common(p)
    p.add_argument("--gdd-fs2", type=float, help="pre-chirp in fs^2 (default 0)")
    p.set_defaults(func=cmd_sc)

    p = sub.add_parser("dfg", help="one mid-infrared DFG setting")
    common(p)
    p.add_argument("--setting", help="setting label (default: first in table)")
    p.add_argument("--objective", choices=("sensor", "peak"), default="sensor")
    p.set_defaults(func=cmd_dfg)

    p = sub.add_parser("ftir", help="interferogram synthesis and inversion")
    common(p)
    p.add_argument("--input", required=True, help="spectrum CSV to measure")
    p.add_argument("--opd-max-cm", type=float)
    p.add_argument("--samples", type=int)
    p.add_argument("--apodization", choices=("none", "triangular"), default="none")
    p.set_defaults(func=cmd_ftir)

    p = sub.add_parser("dualcomb", help="dual-comb measurement simulation")
    common(p)
    p.add_argument("--input", help="spectrum CSV (default: run first setting)")
    p.add_argument("--setting", help="setting label when no --input given")
    p.add_argument("--gas", help="gas lines CSV: center,peak_absorbance,hwhm")
    p.add_argument("--frames", type=int)
    p.set_defaults(func=cmd_dualcomb)

    p = sub.add_parser("snr", help="detector signal-to-noise budget")
    p.add_argument("--power-mw", type=float, default=1.0)
    p.add_argument("--channels", type=int, default=1000)
    p.add_argument("--nep-pw", type=float, default=10.0)
    p.set_defaults(func=cmd_snr)

    p = sub.add_parser("pipeline", help="full multi-setting run with report")
    common(p)
    p.add_argument("--objective", choices=("sensor", "peak"), default="sensor")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("thickness", help="usable width versus crystal thickness")
    common(p)
    p.add_argument("--setting", help="setting label (default: widest usable)")
    p.add_argument("--thickness-mm", type=float, nargs="+",
                   default=[1.0, 0.5, 0.4])
    p.set_defaults(func=cmd_thickness)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except PhysicsError as err:
        print(f"physics error: {err}", file=sys.stderr)
        return EXIT_PHYSICS
    except NumericsError as err:
        print(f"numerics error: {err}", file=sys.stderr)
        return EXIT_NUMERICS
    except (OSError, ValueError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
