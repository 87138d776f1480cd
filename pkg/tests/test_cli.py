import math
import subprocess
import sys

import numpy as np
import pytest

from mircomb.config import default_config_text
from mircomb.spectral import PowerSpectrum, SpectralGrid, read_spectrum_csv, write_spectrum_csv

SUBCOMMANDS = ("units", "comb", "pm", "sc", "dfg", "ftir", "dualcomb", "snr",
               "pipeline", "thickness")


def run_cli(*argv, check=False):
    proc = subprocess.run([sys.executable, "-m", "mircomb.cli", *argv],
                          capture_output=True, text=True)
    if check and proc.returncode != 0:
        raise AssertionError(f"cli {argv} failed ({proc.returncode}): {proc.stderr}")
    return proc


@pytest.fixture(scope="module")
def small_config(tmp_path_factory):
    """One-setting config with a narrow angle window: fast to run."""
    text = default_config_text()
    head, _, _ = text.partition("[[source.setting]]")
    head = head.replace("theta_search = [30.0, 43.0]",
                        "theta_search = [33.6, 34.6]")
    text = head + (
        '[[source.setting]]\nlabel = "q"\nsc_center_um = 1.9\nsc_fwhm_cm = 800.0\n'
        "\n[dualcomb]\ndelta_f_rep = 950.0\nband_lo_cm = 990.0\n"
        "band_hi_cm = 1010.0\nframes = 3\n"
    )
    p = tmp_path_factory.mktemp("cfg") / "small.cfg"
    p.write_text(text)
    return str(p)


@pytest.fixture(scope="module")
def sample_spectrum_csv(tmp_path_factory):
    grid = SpectralGrid(800.0, 1.0, 801)
    nu = grid.wavenumbers()
    d = np.exp(-4 * math.log(2) * ((nu - 1100) / 250.0) ** 2)
    s = PowerSpectrum(grid, d)
    p = tmp_path_factory.mktemp("spec") / "sample.csv"
    write_spectrum_csv(s, p)
    return str(p)


class TestHelp:
    def test_top_level_help(self):
        proc = run_cli("--help", check=False)
        assert proc.returncode == 0
        for name in SUBCOMMANDS:
            assert name in proc.stdout

    @pytest.mark.parametrize("name", SUBCOMMANDS)
    def test_subcommand_help(self, name):
        proc = run_cli(name, "--help")
        assert proc.returncode == 0
        assert "--help" in proc.stdout or "usage" in proc.stdout

    def test_unknown_flag_is_error(self):
        proc = run_cli("snr", "--bogus-flag", "1")
        assert proc.returncode == 2

    def test_unknown_subcommand_is_error(self):
        proc = run_cli("frobnicate")
        assert proc.returncode == 2


class TestSnr:
    def test_quoted_budget(self):
        proc = run_cli("snr", "--power-mw", "1", "--channels", "1000",
                       "--nep-pw", "10", check=True)
        assert "1e+05" in proc.stdout
        assert "1e+10" in proc.stdout


class TestUnitsAndComb:
    def test_units(self):
        proc = run_cli("units", "--wavenumber", "1000", check=True)
        assert "2.9979245800e+13" in proc.stdout

    def test_units_requires_a_value(self):
        proc = run_cli("units")
        assert proc.returncode == 2

    def test_comb_count_700(self):
        proc = run_cli("comb", "--band", "700", "--frep-mhz", "40", check=True)
        assert "524637 modes" in proc.stdout
        assert "harmonic=True" in proc.stdout

    def test_comb_explicit_band(self):
        proc = run_cli("comb", "--band", "700:1400", "--fceo-mhz", "7", check=True)
        assert "harmonic=False" in proc.stdout


class TestPm:
    def test_matchable(self):
        proc = run_cli("pm", "--idler-cm", "1000", check=True)
        assert "external" in proc.stdout

    def test_not_matchable_exit_3(self):
        proc = run_cli("pm", "--idler-cm", "450")
        assert proc.returncode == 3
        assert "physics error" in proc.stderr


class TestConfigErrors:
    def test_bad_config_exit_2(self, tmp_path):
        p = tmp_path / "bad.cfg"
        p.write_text("[source]\nnot_a_key = 1\n[[source.setting]]\nlabel='x'\n"
                     "sc_center_um=1.9\nsc_fwhm_cm=600.0\n")
        proc = run_cli("dfg", "--config", str(p), "--out", str(tmp_path / "o"))
        assert proc.returncode == 2
        assert "config error" in proc.stderr

    def test_missing_config_exit_2(self, tmp_path):
        proc = run_cli("dfg", "--config", str(tmp_path / "none.cfg"),
                       "--out", str(tmp_path / "o"))
        assert proc.returncode == 2


class TestFtir:
    def test_round_trip_files(self, tmp_path, small_config, sample_spectrum_csv):
        out = tmp_path / "ftir"
        proc = run_cli("ftir", "--config", small_config,
                       "--input", sample_spectrum_csv, "--out", str(out),
                       check=True)
        assert "resolution 25 cm^-1" in proc.stdout
        rec = read_spectrum_csv(out / "recovered.csv")
        src = read_spectrum_csv(sample_spectrum_csv)
        got = np.interp(src.wavenumbers(), rec.wavenumbers(), rec.density)
        err = np.sqrt(np.mean((got - src.density) ** 2)) / src.density.max()
        assert err < 0.01

    def test_plot_flag_writes_svg(self, tmp_path, small_config, sample_spectrum_csv):
        out = tmp_path / "ftirplot"
        run_cli("ftir", "--config", small_config, "--input", sample_spectrum_csv,
                "--out", str(out), "--plot", check=True)
        svg = (out / "recovered.svg").read_text()
        assert svg.startswith("<svg")
        assert "polyline" in svg


class TestDualcomb:
    def test_seeded_golden(self, tmp_path, small_config, sample_spectrum_csv):
        out1 = tmp_path / "one"
        out2 = tmp_path / "two"
        for out in (out1, out2):
            run_cli("dualcomb", "--config", small_config,
                    "--input", sample_spectrum_csv, "--out", str(out),
                    "--frames", "2", "--seed", "11", check=True)
        assert (out1 / "dualcomb_recovered.csv").read_bytes() \
            == (out2 / "dualcomb_recovered.csv").read_bytes()
        assert (out1 / "dualcomb_interferogram.csv").read_bytes() \
            == (out2 / "dualcomb_interferogram.csv").read_bytes()

    def test_different_seed_differs(self, tmp_path, small_config,
                                    sample_spectrum_csv):
        out1 = tmp_path / "one"
        out2 = tmp_path / "two"
        run_cli("dualcomb", "--config", small_config, "--input",
                sample_spectrum_csv, "--out", str(out1), "--frames", "2",
                "--seed", "11", check=True)
        run_cli("dualcomb", "--config", small_config, "--input",
                sample_spectrum_csv, "--out", str(out2), "--frames", "2",
                "--seed", "12", check=True)
        assert (out1 / "dualcomb_recovered.csv").read_bytes() \
            != (out2 / "dualcomb_recovered.csv").read_bytes()


class TestDfgAndPipeline:
    def test_dfg_summary_and_csv(self, tmp_path, small_config):
        out = tmp_path / "dfg"
        proc = run_cli("dfg", "--config", small_config, "--out", str(out),
                       check=True)
        assert "theta_ext" in proc.stdout
        s = read_spectrum_csv(out / "dfg_q.csv")
        assert s.grid.count > 100

    def test_pipeline_single_setting(self, tmp_path, small_config):
        out = tmp_path / "pipe"
        proc = run_cli("pipeline", "--config", small_config, "--out", str(out),
                       check=True)
        assert (out / "report.csv").exists()
        assert (out / "spectrum_q.csv").exists()
        assert (out / "manifest.json").exists()
        assert "usable coverage hull" in proc.stdout
