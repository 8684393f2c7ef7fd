"""Shared fixtures for the test suite.

The 256^2 joint amplitude of the calibrated device, its Schmidt data
and the large ideal-detector tag stream are expensive, so they are
session scoped and shared between the unit tests and the acceptance
suite.
"""

import time

import numpy as np
import pytest

from spdckit import (DetectorModel, Grid2D, SourceBrightness, build_jsa,
                     co_propagating_device, default_device, default_pump,
                     schmidt_decompose, simulate_pair_tags, table_model)
from spdckit.phasematch import DeviceSpec

SIGNAL_WINDOW = (1538.0, 1554.0)
IDLER_WINDOW = (1548.5, 1551.5)

# marginal centroids of the default-device 256^2 JSI; the wavelength
# recovery pins the recovered centroid to lambda_ref, so centroids (not
# axis midpoints) are the correct anchors.  Same values as the config
# defaults.
LAMBDA_REF_SIGNAL = 1545.954046947251
LAMBDA_REF_IDLER = 1550.053146656898

IDEAL_DETECTOR = DetectorModel(efficiency=1.0, jitter_sigma_ps=0.0,
                               dark_count_hz=0.0, dead_time_ps=0.0)


def make_flat_device(length_mm=0.5, poling_period_um=0.3875):
    """Constant-index toy: n = 2 in both bands, so the PMF is an ideal
    sinc and the device is degenerate at exactly 775.0 nm."""
    telecom = table_model([900.0, 1500.0, 2100.0, 2700.0, 3300.0, 3900.0, 4300.0],
                          [2.0] * 7, label="flat-telecom")
    pump = table_model([700.0, 720.0, 760.0, 790.0, 820.0, 840.0, 860.0],
                       [2.0] * 7, label="flat-pump")
    from spdckit.dispersion import WaveguideDispersion
    return DeviceSpec(geometry="counter_propagating",
                      poling_period_um=poling_period_um, qpm_order=1,
                      duty_cycle=0.5, length_mm=length_mm,
                      dispersion=WaveguideDispersion(telecom=telecom, pump=pump),
                      label="flat")


def rebin_to_grid(jsi: Grid2D, signal_range, idler_range, n: int) -> np.ndarray:
    """Rebin a fine intensity grid onto an n x n histogram grid by
    depositing each cell's mass at its center."""
    ss, ii = np.meshgrid(jsi.row_axis, jsi.col_axis, indexing="ij")
    counts, _, _ = np.histogram2d(ss.ravel(), ii.ravel(), bins=[n, n],
                                  range=[list(signal_range), list(idler_range)],
                                  weights=jsi.values.ravel())
    return counts


@pytest.fixture(scope="session")
def device_a():
    return default_device()


@pytest.fixture(scope="session")
def pump():
    return default_pump()


@pytest.fixture(scope="session")
def co_device():
    return co_propagating_device()


@pytest.fixture(scope="session")
def flat_device():
    return make_flat_device()


@pytest.fixture(scope="session")
def jsa256(device_a, pump):
    return build_jsa(device_a, pump, SIGNAL_WINDOW, IDLER_WINDOW, 256)


@pytest.fixture(scope="session")
def schmidt256(jsa256):
    return schmidt_decompose(jsa256)


@pytest.fixture(scope="session")
def ideal_pair_run(schmidt256):
    """Ideal-detector dispersed-pair stream at criterion-6 settings:
    mu = 0.05, 2e7 pulses, seed 5, ~1.1e6 detected pairs.  Returns the
    stream and the wall time the simulation took."""
    t0 = time.perf_counter()
    stream = simulate_pair_tags(
        schmidt256, SourceBrightness(0.05), 20_000_000,
        detectors={"signal": IDEAL_DETECTOR, "idler": IDEAL_DETECTOR},
        lambda_ref_nm={"signal": LAMBDA_REF_SIGNAL, "idler": LAMBDA_REF_IDLER},
        seed=5)
    return stream, time.perf_counter() - t0
