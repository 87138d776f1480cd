import math
import time

import pytest

from mircomb.config import default_config_text, parse_config
from mircomb.crystal import default_crystal
from mircomb.pipeline import tuning_scan
from mircomb.propagation import FiberParams, StepControl
from mircomb.pulse import TimeGrid, gaussian_pulse

#: chirp ladder (s^2) used by the tuning tests; matches the demo scripts
GDD_TABLE = tuple(g * 1e-30 for g in (0.0, 3000.0, 6000.0, 9000.0, 12000.0))


@pytest.fixture(scope="session")
def gase():
    return default_crystal()


@pytest.fixture(scope="session")
def default_fiber():
    """The bundled illustrative fiber (matches data/default.cfg)."""
    return FiberParams(length=0.06, beta2=-2.0e-26, beta3=1.0e-40, gamma=0.005,
                      raman_fraction=0.18, raman_tau1=1.22e-14,
                      raman_tau2=3.2e-14, self_steepening=True)


@pytest.fixture(scope="session")
def sc_seed():
    """Continuum-branch seed: 100 fs, 4 nJ (160 mW at 40 MHz), 1.55 um."""
    energy = 160e-3 / 4e7
    p_peak = energy / (100e-15 * math.sqrt(math.pi / (4 * math.log(2))))
    return gaussian_pulse(100e-15, p_peak, 1.55, TimeGrid(8192, 2.0e-15))


@pytest.fixture(scope="session")
def gdd_table():
    return GDD_TABLE


@pytest.fixture(scope="session")
def sc_step_control():
    return StepControl(dz=2.0e-5, max_nonlinear_phase_per_step=0.02)


@pytest.fixture(scope="session")
def default_run_config():
    return parse_config(default_config_text().encode(), origin="<bundled default>")


_TIMINGS = {}


@pytest.fixture(scope="session")
def default_report(default_run_config):
    """Full five-setting run of the bundled defaults (computed once)."""
    t0 = time.perf_counter()
    report = tuning_scan(default_run_config.source,
                         detector=default_run_config.detector)
    _TIMINGS["default_report_seconds"] = time.perf_counter() - t0
    return report


@pytest.fixture(scope="session")
def default_report_seconds(default_report):
    return _TIMINGS["default_report_seconds"]
