import math

import numpy as np
import pytest

from spdckit.analysis import (CoincidenceHistogram, car, fidelity,
                              g2_from_histogram, histogram_coincidences,
                              reconstruct_jsi, wavelengths_from_tags)
from spdckit.errors import (EmptySidePeaksError, InputError,
                            InsufficientSpanError, MissingTriggerError,
                            NegativeIntensityError, ShapeMismatchError,
                            UnknownChannelError, ZeroDispersionError)
from spdckit.jsa import jsa_from_jsi, purity, schmidt_decompose, synthetic_schmidt
from spdckit.tagsim import (DetectorModel, SourceBrightness, TimeTagStream,
                            simulate_g2_tags, simulate_pair_tags)

from conftest import (IDEAL_DETECTOR, IDLER_WINDOW, LAMBDA_REF_IDLER,
                      LAMBDA_REF_SIGNAL, SIGNAL_WINDOW)

PERIOD = 12500


def two_channel_stream(times_a, times_b, period=PERIOD):
    times = np.concatenate([times_a, times_b]).astype(np.int64)
    channels = np.concatenate([np.zeros(len(times_a), dtype=np.int32),
                               np.ones(len(times_b), dtype=np.int32)])
    order = np.lexsort((channels, times))
    return TimeTagStream(channel_names=("a", "b"), channels=channels[order],
                         times_ps=times[order], clock_period_ps=period, seed=0)


def test_identical_times_single_zero_bin():
    stream = two_channel_stream([1000], [1000])
    hist = histogram_coincidences(stream, "a", "b", 100.0, 2000.0)
    center = hist.counts[hist.centers_ps == 0.0]
    assert center.tolist() == [1]
    assert hist.counts.sum() == 1


def test_histogram_swap_mirrors():
    rng = np.random.default_rng(3)
    ta = np.sort(rng.integers(0, 10_000_000, 400))
    tb = np.sort(rng.integers(0, 10_000_000, 300))
    stream = two_channel_stream(ta, tb)
    h_ab = histogram_coincidences(stream, "a", "b", 250.0, 50_000.0)
    h_ba = histogram_coincidences(stream, "b", "a", 250.0, 50_000.0)
    assert np.array_equal(h_ab.counts, h_ba.counts[::-1])
    assert h_ab.counts.sum() > 0


def test_histogram_flat_for_independent_poisson():
    # two independent uniform processes: every bin within 3 sigma of the
    # analytic accidental level
    rng = np.random.default_rng(11)
    total = 2_000_000_000
    n_a, n_b = 40_000, 40_000
    ta = np.sort(rng.integers(0, total, n_a))
    tb = np.sort(rng.integers(0, total, n_b))
    stream = two_channel_stream(ta, tb)
    hist = histogram_coincidences(stream, "a", "b", 1000.0, 40_000.0)
    expected = n_a * n_b * 1000.0 / total
    sigma = math.sqrt(expected)
    assert np.all(np.abs(hist.counts - expected) < 3.0 * sigma)


def test_histogram_validation():
    stream = two_channel_stream([1000], [2000])
    with pytest.raises(InputError):
        histogram_coincidences(stream, "a", "b", -1.0, 1000.0)
    with pytest.raises(InputError):
        histogram_coincidences(stream, "a", "b", 100.0, 0.0)
    with pytest.raises(UnknownChannelError):
        histogram_coincidences(stream, "a", "nope", 100.0, 1000.0)
    # span below one bin still yields the single central bin
    tiny = histogram_coincidences(stream, "a", "b", 100.0, 50.0)
    assert tiny.centers_ps.tolist() == [0.0]


def test_coincidence_comb_on_pulse_grid():
    sd = synthetic_schmidt([1.0, 0.6])
    dets = {"out1": IDEAL_DETECTOR, "out2": IDEAL_DETECTOR}
    stream = simulate_g2_tags(sd, SourceBrightness(0.05), 200_000,
                              detectors=dets, seed=14)
    hist = histogram_coincidences(stream, "out1", "out2", 100.0, 4 * PERIOD)
    nonzero = hist.centers_ps[hist.counts > 0]
    assert nonzero.size > 0
    assert np.all(np.mod(nonzero, PERIOD) == 0)


def flat_histogram(count=50, bin_width=100.0, half_span=6.3 * PERIOD):
    m = int(half_span / bin_width)
    centers = (np.arange(2 * m + 1) - m) * bin_width
    counts = np.full(centers.size, count, dtype=np.int64)
    return CoincidenceHistogram(bin_width_ps=bin_width, centers_ps=centers,
                                counts=counts, total_windows=1_000_000)


def test_g2_flat_histogram_is_one():
    g2, err = g2_from_histogram(flat_histogram(), PERIOD)
    assert g2 == pytest.approx(1.0, abs=1e-12)
    assert err > 0


def test_g2_doubled_center_is_two():
    hist = flat_histogram()
    boost = np.abs(hist.centers_ps) <= PERIOD / 4.0
    hist.counts[boost] *= 2
    g2, _ = g2_from_histogram(hist, PERIOD)
    assert g2 == pytest.approx(2.0, abs=1e-12)


def test_g2_scale_invariant():
    h1 = flat_histogram(count=50)
    h7 = flat_histogram(count=350)
    assert g2_from_histogram(h1, PERIOD)[0] == pytest.approx(
        g2_from_histogram(h7, PERIOD)[0], abs=1e-12)


def test_g2_validation():
    hist = flat_histogram()
    with pytest.raises(InputError):
        g2_from_histogram(hist, PERIOD, n_side_peaks=2)
    with pytest.raises(InsufficientSpanError):
        g2_from_histogram(flat_histogram(half_span=2 * PERIOD), PERIOD)
    empty = flat_histogram(count=0)
    with pytest.raises(EmptySidePeaksError):
        g2_from_histogram(empty, PERIOD)


def test_g2_recovers_thermal_mixture():
    # two equal modes: expected g2 = 1 + sum(lam^2) = 1.5
    sd = synthetic_schmidt([1.0, 1.0])
    dets = {"out1": IDEAL_DETECTOR, "out2": IDEAL_DETECTOR}
    stream = simulate_g2_tags(sd, SourceBrightness(0.02), 2_000_000,
                              detectors=dets, seed=10)
    hist = histogram_coincidences(stream, "out1", "out2", 100.0, 6.3 * PERIOD)
    g2, err = g2_from_histogram(hist, PERIOD)
    assert abs(g2 - 1.5) < 3.0 * err
    assert err < 0.1


def test_reconstruction_single_mode_lands_in_one_cell():
    sd = synthetic_schmidt([1.0])
    stream = simulate_pair_tags(sd, SourceBrightness(0.05), 50_000,
                                detectors={"signal": IDEAL_DETECTOR,
                                           "idler": IDEAL_DETECTOR},
                                lambda_ref_nm={"signal": 1550.0, "idler": 1550.0},
                                seed=2)
    grid = reconstruct_jsi(stream, (1549.0, 1551.0), (1549.0, 1551.0), 16,
                           {"signal": 510.0, "idler": 510.0},
                           {"signal": 1550.0, "idler": 1550.0})
    assert grid.kind == "counts"
    total = grid.values.sum()
    assert total > 1000
    row, col = np.unravel_index(int(np.argmax(grid.values)), grid.values.shape)
    half_bin = (1551.0 - 1549.0) / 16 / 2
    assert abs(grid.row_axis[row] - 1550.0) <= half_bin
    assert abs(grid.col_axis[col] - 1550.0) <= half_bin
    assert grid.values[row, col] == total


def test_jitter_widens_recovered_marginal_in_quadrature(schmidt256):
    rms = {}
    for jit in (0.0, 25.0):
        dets = {"signal": IDEAL_DETECTOR,
                "idler": DetectorModel(efficiency=1.0, jitter_sigma_ps=jit,
                                       dark_count_hz=0.0, dead_time_ps=0.0)}
        stream = simulate_pair_tags(schmidt256, SourceBrightness(0.05),
                                    1_000_000, detectors=dets,
                                    lambda_ref_nm={"signal": LAMBDA_REF_SIGNAL,
                                                   "idler": LAMBDA_REF_IDLER},
                                    seed=21)
        _, lam = wavelengths_from_tags(stream, "idler", 510.0, LAMBDA_REF_IDLER)
        rms[jit] = float(np.std(lam))
    predicted = math.sqrt(rms[0.0] ** 2 + (25.0 / 510.0) ** 2)
    assert abs(rms[25.0] - predicted) < 0.003
    assert rms[25.0] > rms[0.0]


def test_reconstruction_marginal_consistency(schmidt256):
    stream = simulate_pair_tags(schmidt256, SourceBrightness(0.003), 300_000,
                                detectors={"signal": IDEAL_DETECTOR,
                                           "idler": IDEAL_DETECTOR},
                                lambda_ref_nm={"signal": LAMBDA_REF_SIGNAL,
                                               "idler": LAMBDA_REF_IDLER},
                                seed=15)
    grid = reconstruct_jsi(stream, SIGNAL_WINDOW, IDLER_WINDOW, 64,
                           {"signal": 510.0, "idler": 510.0},
                           {"signal": LAMBDA_REF_SIGNAL,
                            "idler": LAMBDA_REF_IDLER})
    marg2d = grid.values.sum(axis=1)
    _, lam = wavelengths_from_tags(stream, "signal", 510.0, LAMBDA_REF_SIGNAL)
    edges = np.linspace(SIGNAL_WINDOW[0], SIGNAL_WINDOW[1], 65)
    marg1d, _ = np.histogram(lam, bins=edges)
    p = marg2d / marg2d.sum()
    q = marg1d / marg1d.sum()
    bc = float(np.sum(np.sqrt(p * q)))
    assert bc >= 0.9999


def test_end_to_end_amplitude_purity(ideal_pair_run):
    stream, _ = ideal_pair_run
    grid = reconstruct_jsi(stream, SIGNAL_WINDOW, IDLER_WINDOW, 128,
                           {"signal": 510.0, "idler": 510.0},
                           {"signal": LAMBDA_REF_SIGNAL,
                            "idler": LAMBDA_REF_IDLER})
    amp = jsa_from_jsi(grid)
    p = purity(schmidt_decompose(amp))
    assert p == pytest.approx(0.9087835299191805, abs=1e-9)
    # model value with the phase discarded on the same windows at 256^2
    assert abs(p - 0.884234437668781) < 0.03


def test_car_bright_pairs(schmidt256):
    stream = simulate_pair_tags(schmidt256, SourceBrightness(0.003),
                                2_000_000, seed=3)
    value = car(stream)
    assert value == pytest.approx(1309.3333333333333, rel=1e-12)
    assert 1e2 <= value <= 1e4


def test_car_darks_only():
    sd = synthetic_schmidt([1.0])
    noisy = DetectorModel(efficiency=1.0, jitter_sigma_ps=0.0,
                          dark_count_hz=1.0e6, dead_time_ps=0.0)
    stream = simulate_pair_tags(sd, SourceBrightness(0.0), 1_000_000,
                                detectors={"signal": noisy, "idler": noisy},
                                seed=19)
    value = car(stream)
    assert 1.0 / 3.0 < value < 3.0


def test_car_validation(schmidt256):
    stream = simulate_pair_tags(schmidt256, SourceBrightness(0.003),
                                100_000, seed=3)
    with pytest.raises(InputError):
        car(stream, window_ps=0.0)
    with pytest.raises(InputError):
        car(stream, window_ps=PERIOD)
    empty = simulate_pair_tags(synthetic_schmidt([1.0]), SourceBrightness(0.0),
                               1000, detectors={"signal": IDEAL_DETECTOR,
                                                "idler": IDEAL_DETECTOR},
                               seed=0)
    with pytest.raises(EmptySidePeaksError):
        car(empty)


def test_wavelengths_error_paths():
    stream = simulate_pair_tags(synthetic_schmidt([1.0]), SourceBrightness(0.05),
                                1000, seed=1)
    with pytest.raises(ZeroDispersionError):
        wavelengths_from_tags(stream, "signal", 0.0, 1550.0)
    with pytest.raises(UnknownChannelError):
        wavelengths_from_tags(stream, "telecom", 510.0, 1550.0)
    # trigger channel declared but without a single event
    no_trigger = TimeTagStream(channel_names=("trigger", "signal", "idler"),
                               channels=np.array([1, 2], dtype=np.int32),
                               times_ps=np.array([100, 200], dtype=np.int64),
                               clock_period_ps=PERIOD, seed=0)
    with pytest.raises(MissingTriggerError):
        wavelengths_from_tags(no_trigger, "signal", 510.0, 1550.0)


def test_reconstruct_jsi_requires_channel_entries():
    stream = simulate_pair_tags(synthetic_schmidt([1.0]), SourceBrightness(0.05),
                                1000, seed=1)
    with pytest.raises(InputError):
        reconstruct_jsi(stream, (1549.0, 1551.0), (1549.0, 1551.0), 8,
                        {"signal": 510.0}, {"signal": 1550.0, "idler": 1550.0})


def test_fidelity_trivials():
    p = np.array([[0.2, 0.3], [0.1, 0.4]])
    assert fidelity(p, p) == pytest.approx(1.0, abs=1e-12)
    assert fidelity(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 0.0
    assert fidelity(np.array([1.0, 0.0]),
                    np.array([0.5, 0.5])) == pytest.approx(0.5, abs=1e-12)
    with pytest.raises(ShapeMismatchError):
        fidelity(np.ones(3), np.ones(4))
    with pytest.raises(NegativeIntensityError):
        fidelity(np.array([1.0, -0.1]), np.array([0.5, 0.5]))
    with pytest.raises(InputError):
        fidelity(np.zeros(3), np.ones(3))


def test_fidelity_accepts_grids():
    from spdckit.gridio import Grid2D
    axes = np.linspace(0.0, 1.0, 4)
    g = Grid2D(row_axis=axes, col_axis=axes, values=np.ones((4, 4)),
               kind="counts")
    assert fidelity(g, g) == 1.0
