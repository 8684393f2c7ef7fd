"""Observables from time-tag streams.

Start-stop coincidence histograms, the pulsed unheralded g2(0) and its
purity reading, the coincidence-to-accidental ratio, and wavelength
reconstruction through a known dispersion (time-of-flight
spectroscopy).  Every routine works on sorted TimeTagStream data and is
deterministic.

Wavelength recovery needs the absolute reference lambda_ref for each
channel; only relative offsets are observable in arrival times, so the
caller must supply the line centers (measured upstream) rather than
have them guessed here.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .errors import (EmptySidePeaksError, InputError, InsufficientSpanError,
                     MissingTriggerError, NegativeIntensityError,
                     ShapeMismatchError, ZeroDispersionError)
from .gridio import Grid2D
from .tagsim import TimeTagStream

_CHUNK = 1 << 20


@dataclass(frozen=True)
class CoincidenceHistogram:
    """Counts of stop-minus-start delays on uniform bins centered at 0."""

    bin_width_ps: float
    centers_ps: np.ndarray
    counts: np.ndarray
    total_windows: int

    def __post_init__(self):
        if self.centers_ps.shape != self.counts.shape:
            raise InputError("centers and counts must be congruent")
        if np.any(self.counts < 0):
            raise InputError("counts must be >= 0")


def histogram_coincidences(stream: TimeTagStream, channel_a: str, channel_b: str,
                           bin_width_ps: float, span_ps: float) -> CoincidenceHistogram:
    """All (a, b) delays b - a binned to the nearest center k*bin_width.

    Centers run over |k| <= floor(span/bin_width); each pair counts in
    its nearest bin, so the histogram is exactly mirrored when the
    channels are swapped.
    """
    if bin_width_ps <= 0.0 or span_ps <= 0.0:
        raise InputError("bin width and span must be positive")
    ta = stream.times_for(channel_a)
    tb = stream.times_for(channel_b)
    m = int(math.floor(span_ps / bin_width_ps))
    counts = np.zeros(2 * m + 1, dtype=np.int64)
    reach = (m + 0.5) * bin_width_ps
    for lo in range(0, ta.size, _CHUNK):
        a = ta[lo:lo + _CHUNK]
        first = np.searchsorted(tb, a - reach, side="left")
        last = np.searchsorted(tb, a + reach, side="right")
        reps = last - first
        total = int(reps.sum())
        if total == 0:
            continue
        flat = np.arange(total) - np.repeat(np.cumsum(reps) - reps, reps) \
            + np.repeat(first, reps)
        delta = tb[flat] - np.repeat(a, reps)
        k = np.rint(delta / bin_width_ps).astype(np.int64)
        k = k[np.abs(k) <= m]
        np.add.at(counts, k + m, 1)
    centers = np.arange(-m, m + 1, dtype=float) * bin_width_ps
    return CoincidenceHistogram(bin_width_ps=float(bin_width_ps), centers_ps=centers,
                                counts=counts, total_windows=int(ta.size))


def _peak_sum(hist: CoincidenceHistogram, center_ps: float, half_width_ps: float) -> int:
    sel = np.abs(hist.centers_ps - center_ps) <= half_width_ps
    return int(hist.counts[sel].sum())


def g2_from_histogram(hist: CoincidenceHistogram, rep_period_ps: float,
                      n_side_peaks: int = 5) -> tuple:
    """Central comb peak over the mean of n_side_peaks peaks each side.

    Integration window is rep_period/2 around each peak (bins counted by
    center membership).  Returns (g2_zero, poisson_error); the purity
    estimate is g2_zero - 1.
    """
    if n_side_peaks < 3:
        raise InputError("n_side_peaks must be >= 3")
    period = float(rep_period_ps)
    half = period / 4.0
    needed = n_side_peaks * period + half
    if hist.centers_ps[-1] < needed or hist.centers_ps[0] > -needed:
        raise InsufficientSpanError(
            f"histogram spans {hist.centers_ps[0]:.0f}..{hist.centers_ps[-1]:.0f} ps, "
            f"need +-{needed:.0f}")
    central = _peak_sum(hist, 0.0, half)
    side_total = 0
    for k in range(1, n_side_peaks + 1):
        side_total += _peak_sum(hist, k * period, half)
        side_total += _peak_sum(hist, -k * period, half)
    if side_total == 0:
        raise EmptySidePeaksError("no counts in any side peak")
    mean_side = side_total / (2 * n_side_peaks)
    g2 = central / mean_side
    if central > 0:
        err = g2 * math.sqrt(1.0 / central + 1.0 / side_total)
    else:
        err = 1.0 / mean_side          # one-count scale, avoids claiming 0 +- 0
    return g2, err


def _count_pairs_in_window(ta: np.ndarray, tb: np.ndarray,
                           offset_ps: float, half_width_ps: float) -> int:
    lo = np.searchsorted(tb, ta + (offset_ps - half_width_ps), side="left")
    hi = np.searchsorted(tb, ta + (offset_ps + half_width_ps), side="right")
    return int((hi - lo).sum())


def car(stream: TimeTagStream, signal_channel: str = "signal",
        idler_channel: str = "idler", rep_period_ps: float | None = None,
        window_ps: float = 1000.0) -> float:
    """Coincidence-to-accidental ratio of the zero-delay window against
    the mean of the windows one repetition period away."""
    period = float(stream.clock_period_ps if rep_period_ps is None else rep_period_ps)
    if not 0.0 < window_ps < period / 2.0:
        raise InputError("window must be positive and below half a period")
    ts = stream.times_for(signal_channel)
    ti = stream.times_for(idler_channel)
    half = window_ps / 2.0
    zero = _count_pairs_in_window(ts, ti, 0.0, half)
    sides = _count_pairs_in_window(ts, ti, period, half) \
        + _count_pairs_in_window(ts, ti, -period, half)
    if sides == 0:
        raise EmptySidePeaksError("no accidental counts at +-1 period")
    return zero / (sides / 2.0)


def wavelengths_from_tags(stream: TimeTagStream, channel: str,
                          dispersion_ps_per_nm: float, lambda_ref_nm: float,
                          trigger_channel: str = "trigger") -> tuple:
    """Per-event wavelengths from trigger-relative arrival times.

    Returns (pulse_index, wavelength_nm).  The fixed electronic offset
    between trigger and detector is calibrated out by a circular mean of
    the trigger-relative delays, which pins the marginal centroid to
    lambda_ref_nm.
    """
    if dispersion_ps_per_nm == 0.0:
        raise ZeroDispersionError(f"channel {channel!r}: dispersion must be nonzero")
    trig = stream.times_for(trigger_channel)
    if trig.size == 0:
        raise MissingTriggerError(f"no events on trigger channel {trigger_channel!r}")
    t = stream.times_for(channel)
    idx = np.searchsorted(trig, t)
    right = np.minimum(idx, trig.size - 1)
    left = np.maximum(idx - 1, 0)
    use_left = np.abs(t - trig[left]) <= np.abs(t - trig[right])
    nearest = np.where(use_left, left, right)
    delta = (t - trig[nearest]).astype(float)
    period = float(stream.clock_period_ps)
    phase = 2.0 * np.pi * delta / period
    mean_vec = np.mean(np.exp(1j * phase)) if delta.size else 1.0 + 0j
    offset = period * float(np.angle(mean_vec)) / (2.0 * np.pi)
    rel = delta - offset
    rel -= period * np.round(rel / period)
    return nearest, lambda_ref_nm + rel / dispersion_ps_per_nm


def _combo_indices(pulse_a: np.ndarray, pulse_b: np.ndarray) -> tuple:
    """Index pairs for every a-b combination sharing a pulse."""
    ua, start_a, count_a = np.unique(pulse_a, return_index=True, return_counts=True)
    ub, start_b, count_b = np.unique(pulse_b, return_index=True, return_counts=True)
    common, ia, ib = np.intersect1d(ua, ub, return_indices=True)
    if common.size == 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    sa, ca = start_a[ia], count_a[ia]
    sb, cb = start_b[ib], count_b[ib]
    single = (ca == 1) & (cb == 1)
    out_a = [sa[single]]
    out_b = [sb[single]]
    for j in np.nonzero(~single)[0]:      # rare multi-pair pulses
        aa = np.arange(sa[j], sa[j] + ca[j])
        bb = np.arange(sb[j], sb[j] + cb[j])
        out_a.append(np.repeat(aa, cb[j]))
        out_b.append(np.tile(bb, ca[j]))
    return np.concatenate(out_a), np.concatenate(out_b)


def reconstruct_jsi(stream: TimeTagStream, signal_range_nm, idler_range_nm,
                    grid_n, dispersion_ps_per_nm: dict, lambda_ref_nm: dict,
                    trigger_channel: str = "trigger",
                    signal_channel: str = "signal", idler_channel: str = "idler",
                    bandpass_nm: dict | None = None) -> Grid2D:
    """Joint spectral intensity histogram from a dispersed tag stream.

    Every signal-idler combination within one pulse window contributes
    one count.  dispersion_ps_per_nm and lambda_ref_nm are dicts keyed
    by channel name; bandpass_nm optionally masks each channel to a
    (low, high) window before pairing.
    """
    for d in (dispersion_ps_per_nm, lambda_ref_nm):
        for ch in (signal_channel, idler_channel):
            if ch not in d:
                raise InputError(f"missing per-channel value for {ch!r}")
    pulse_s, lam_s = wavelengths_from_tags(
        stream, signal_channel, dispersion_ps_per_nm[signal_channel],
        lambda_ref_nm[signal_channel], trigger_channel)
    pulse_i, lam_i = wavelengths_from_tags(
        stream, idler_channel, dispersion_ps_per_nm[idler_channel],
        lambda_ref_nm[idler_channel], trigger_channel)
    if bandpass_nm:
        if signal_channel in bandpass_nm:
            lo, hi = bandpass_nm[signal_channel]
            keep = (lam_s >= lo) & (lam_s <= hi)
            pulse_s, lam_s = pulse_s[keep], lam_s[keep]
        if idler_channel in bandpass_nm:
            lo, hi = bandpass_nm[idler_channel]
            keep = (lam_i >= lo) & (lam_i <= hi)
            pulse_i, lam_i = pulse_i[keep], lam_i[keep]
    ia, ib = _combo_indices(pulse_s, pulse_i)
    try:
        ns, ni = grid_n
    except TypeError:
        ns = ni = int(grid_n)
    s_lo, s_hi = map(float, signal_range_nm)
    i_lo, i_hi = map(float, idler_range_nm)
    counts, s_edges, i_edges = np.histogram2d(
        lam_s[ia], lam_i[ib], bins=[int(ns), int(ni)],
        range=[[s_lo, s_hi], [i_lo, i_hi]])
    return Grid2D(row_axis=0.5 * (s_edges[:-1] + s_edges[1:]),
                  col_axis=0.5 * (i_edges[:-1] + i_edges[1:]),
                  values=counts, row_label="signal_nm", col_label="idler_nm",
                  kind="counts")


def fidelity(p, q) -> float:
    """Bhattacharyya overlap (sum sqrt(p*q))^2 of two normalized grids."""
    pa = p.values if isinstance(p, Grid2D) else np.asarray(p, dtype=float)
    qa = q.values if isinstance(q, Grid2D) else np.asarray(q, dtype=float)
    if pa.shape != qa.shape:
        raise ShapeMismatchError(f"shapes {pa.shape} and {qa.shape} differ")
    if np.any(pa < 0) or np.any(qa < 0):
        raise NegativeIntensityError("distributions must be nonnegative")
    sp, sq = pa.sum(), qa.sum()
    if sp <= 0 or sq <= 0:
        raise InputError("distributions must have positive total mass")
    bc = float(np.sum(np.sqrt((pa / sp) * (qa / sq))))
    return min(bc * bc, 1.0)
