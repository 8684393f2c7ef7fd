"""Monte-Carlo time-tag streams from a photon-pair source model.

Each pump pulse emits pairs with multimode-thermal statistics: spectral
mode k of the source (Schmidt mode with weight lam_k) contributes an
independent Bose-Einstein pair number of mean mu*lam_k.  That split
carries the photon-number physics (unheralded g2 = 1 + sum lam_k^2).
Pair wavelengths are drawn from the coherent joint intensity |f|^2
rebuilt from the decomposition, because a coherently pumped source
interferes its modes: sampling each mode's separable |u_k|^2 |v_k|^2
instead would wash out the correlation structure a coincidence
measurement actually sees, while leaving g2 untouched (it never
resolves wavelength).  Detection applies dispersive stretching (time =
pulse time + D*(lambda - lambda_ref)), Gaussian jitter, efficiency
thinning, Poisson dark counts and a non-paralyzable dead time.  All
times are integer picoseconds.

Randomness is counter-based so results never depend on execution order:
pulses are processed in fixed blocks of PULSE_BLOCK, block b of a run
with seed s uses a Philox generator keyed by (s, b), and draws inside a
block follow a fixed sequence (per mode pair counts, then joint
spectral uniforms, jitter normals, survival uniforms, per-channel dark
counts).  Two runs with equal seeds are byte-identical whatever the
scheduling; changing PULSE_BLOCK would change streams.

Dark counts and the dead-time sweep run per detector channel; the
trigger channel is electronic and bypasses the detector model.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .errors import InputError, InvalidBrightnessError, UnknownChannelError
from .jsa import SchmidtDecomposition, reconstruct_jsa

PULSE_BLOCK = 65536
DEFAULT_DISPERSION_PS_PER_NM = 510.0   # 17 ps/nm/km times 30 km of fiber
_MODE_WEIGHT_KEEP = 1.0 - 1e-4


@dataclass(frozen=True)
class DetectorModel:
    """Single-photon detector: efficiency, timing jitter, darks, dead time."""

    efficiency: float = 0.8
    jitter_sigma_ps: float = 10.0
    dark_count_hz: float = 100.0
    dead_time_ps: float = 50000.0

    def __post_init__(self):
        if not 0.0 <= self.efficiency <= 1.0:
            raise InputError(f"efficiency {self.efficiency} outside [0, 1]")
        if self.jitter_sigma_ps < 0.0 or self.dead_time_ps < 0.0 or self.dark_count_hz < 0.0:
            raise InputError("jitter, dead time and dark rate must be >= 0")


@dataclass(frozen=True)
class SourceBrightness:
    """Mean pair number per pump pulse, split over modes as mu*lam_k."""

    mean_pairs_per_pulse: float = 0.003

    def __post_init__(self):
        mu = self.mean_pairs_per_pulse
        if not math.isfinite(mu) or mu < 0.0:
            raise InvalidBrightnessError(f"mean pair number {mu!r} must be finite and >= 0")


@dataclass(frozen=True)
class TimeTagStream:
    """Sorted detection record: channel codes index into channel_names."""

    channel_names: tuple
    channels: np.ndarray       # int32 codes
    times_ps: np.ndarray       # int64, nondecreasing
    clock_period_ps: int
    seed: int

    def __post_init__(self):
        if self.channels.shape != self.times_ps.shape:
            raise InputError("channel and time arrays must be congruent")
        if self.times_ps.size and (np.any(np.diff(self.times_ps) < 0) or self.times_ps[0] < 0):
            raise InputError("times must be nondecreasing and >= 0")

    def channel_id(self, name: str) -> int:
        try:
            return self.channel_names.index(name)
        except ValueError:
            raise UnknownChannelError(
                f"channel {name!r} not in {self.channel_names}") from None

    def times_for(self, name: str) -> np.ndarray:
        return self.times_ps[self.channels == self.channel_id(name)]

    def __len__(self):
        return int(self.times_ps.size)


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[seed, block]))


def _mode_weights(schmidt: SchmidtDecomposition) -> np.ndarray:
    """Truncate to the leading modes holding >= 1 - 1e-4 of the weight."""
    lam = schmidt.coefficients
    keep = int(np.searchsorted(np.cumsum(lam), _MODE_WEIGHT_KEEP)) + 1
    keep = min(keep, lam.size)
    w = lam[:keep].copy()
    return w / w.sum()


def _joint_cdf(schmidt: SchmidtDecomposition) -> np.ndarray:
    """Cumulative distribution over flattened (signal, idler) atoms of
    the coherent joint intensity."""
    jsi = np.abs(reconstruct_jsa(schmidt)) ** 2
    flat = jsi.ravel()
    return np.cumsum(flat / flat.sum())


def _sample_atoms(cdf: np.ndarray, u: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(cdf, u, side="right")
    return np.minimum(idx, cdf.size - 1)


def _apply_dead_time(times: np.ndarray, dead_time_ps: float) -> np.ndarray:
    """Keep the first event, then each event >= last kept + dead time."""
    if dead_time_ps <= 0.0 or times.size < 2:
        return np.ones(times.size, dtype=bool)
    keep = np.ones(times.size, dtype=bool)
    dead = int(dead_time_ps)
    last = times[0]
    for j in range(1, times.size):
        if times[j] - last < dead:
            keep[j] = False
        else:
            last = times[j]
    return keep


def _finalize_stream(channel_names, per_channel_times, clock_period_ps, seed,
                     detectors_by_code) -> TimeTagStream:
    """Sort each channel, apply its dead time, then merge and order."""
    all_channels = []
    all_times = []
    for code, chunks in sorted(per_channel_times.items()):
        if not chunks:
            continue
        t = np.sort(np.concatenate(chunks))
        det = detectors_by_code.get(code)
        if det is not None:
            t = t[_apply_dead_time(t, det.dead_time_ps)]
        all_times.append(t)
        all_channels.append(np.full(t.size, code, dtype=np.int32))
    if all_times:
        channels = np.concatenate(all_channels)
        times = np.concatenate(all_times)
        order = np.lexsort((channels, times))
        channels, times = channels[order], times[order]
    else:
        channels = np.empty(0, dtype=np.int32)
        times = np.empty(0, dtype=np.int64)
    return TimeTagStream(channel_names=tuple(channel_names), channels=channels,
                         times_ps=times, clock_period_ps=int(clock_period_ps),
                         seed=int(seed))


def _dark_times(rng, rate_hz: float, t_lo: int, t_hi: int) -> np.ndarray:
    n = rng.poisson(rate_hz * 1e-12 * (t_hi - t_lo))
    return rng.integers(t_lo, t_hi, size=n, dtype=np.int64)


def simulate_pair_tags(schmidt: SchmidtDecomposition,
                       brightness: SourceBrightness,
                       pulses: int,
                       detectors: dict | None = None,
                       dispersion_ps_per_nm: dict | None = None,
                       lambda_ref_nm: dict | None = None,
                       repetition_period_ps: int = 12500,
                       seed: int = 0,
                       bandpass_nm: dict | None = None) -> TimeTagStream:
    """Tag stream of a dispersed pair source on channels trigger/signal/idler.

    The trigger fires once per pulse at (pulse index + 1) * period, so a
    photon advanced by negative dispersion still lands at positive time.
    Per-channel dicts are keyed "signal"/"idler"; lambda_ref_nm defaults
    to the midpoint of each decomposition axis, bandpass_nm gives an
    optional (low, high) hardware filter applied before the detector.
    """
    if pulses < 1:
        raise InputError("pulses must be >= 1")
    detectors = dict(detectors or {})
    detectors.setdefault("signal", DetectorModel())
    detectors.setdefault("idler", DetectorModel())
    dispersion = dict(dispersion_ps_per_nm or {})
    dispersion.setdefault("signal", DEFAULT_DISPERSION_PS_PER_NM)
    dispersion.setdefault("idler", DEFAULT_DISPERSION_PS_PER_NM)
    lam_ref = dict(lambda_ref_nm or {})
    lam_ref.setdefault("signal", float(0.5 * (schmidt.signal_nm[0] + schmidt.signal_nm[-1])))
    lam_ref.setdefault("idler", float(0.5 * (schmidt.idler_nm[0] + schmidt.idler_nm[-1])))
    bandpass = dict(bandpass_nm or {})

    mu = brightness.mean_pairs_per_pulse
    weights = _mode_weights(schmidt)
    joint_cdf = _joint_cdf(schmidt)
    n_idler = schmidt.idler_nm.size

    period = int(repetition_period_ps)
    names = ("trigger", "signal", "idler")
    arm = {"signal": 1, "idler": 2}
    per_channel = {0: [], 1: [], 2: []}

    n_blocks = (pulses + PULSE_BLOCK - 1) // PULSE_BLOCK
    for block in range(n_blocks):
        p_lo = block * PULSE_BLOCK
        p_hi = min(p_lo + PULSE_BLOCK, pulses)
        n_p = p_hi - p_lo
        rng = _block_rng(seed, block)

        pulse_idx = []
        for k in range(weights.size):
            counts = rng.geometric(1.0 / (1.0 + mu * weights[k]), size=n_p) - 1
            pulse_idx.append(p_lo + np.repeat(np.arange(n_p, dtype=np.int64), counts))
        pulse_idx = np.concatenate(pulse_idx)
        atom = _sample_atoms(joint_cdf, rng.random(pulse_idx.size))
        lam = {"signal": schmidt.signal_nm[atom // n_idler],
               "idler": schmidt.idler_nm[atom % n_idler]}
        base = (pulse_idx + 1) * period
        jitter_z = {ch: rng.standard_normal(pulse_idx.size) for ch in ("signal", "idler")}
        survive_u = {ch: rng.random(pulse_idx.size) for ch in ("signal", "idler")}

        for ch in ("signal", "idler"):
            det = detectors[ch]
            keep = survive_u[ch] < det.efficiency
            if ch in bandpass:
                lo, hi = bandpass[ch]
                keep &= (lam[ch] >= lo) & (lam[ch] <= hi)
            t = base[keep] + np.rint(
                dispersion[ch] * (lam[ch][keep] - lam_ref[ch])
                + det.jitter_sigma_ps * jitter_z[ch][keep]).astype(np.int64)
            per_channel[arm[ch]].append(np.maximum(t, 0))

        for ch in ("signal", "idler"):
            per_channel[arm[ch]].append(
                _dark_times(rng, detectors[ch].dark_count_hz, p_lo * period, p_hi * period))

    per_channel[0].append(np.arange(1, pulses + 1, dtype=np.int64) * period)
    return _finalize_stream(names, per_channel, period, seed,
                            {1: detectors["signal"], 2: detectors["idler"]})


def simulate_g2_tags(schmidt: SchmidtDecomposition,
                     brightness: SourceBrightness,
                     pulses: int,
                     splitter_ratio: float = 0.5,
                     detectors: dict | None = None,
                     repetition_period_ps: int = 12500,
                     seed: int = 0) -> TimeTagStream:
    """One arm of the source behind a splitter and two detectors.

    Channels are trigger/out1/out2; a photon goes to out1 with
    probability splitter_ratio.  Arrival times carry no dispersion, so
    wavelengths are never sampled; the central-peak excess of the
    out1-out2 correlation encodes the mode weights via g2 = 1 + sum
    lam_k^2.
    """
    if pulses < 1:
        raise InputError("pulses must be >= 1")
    if not 0.0 <= splitter_ratio <= 1.0:
        raise InputError(f"splitter_ratio {splitter_ratio} outside [0, 1]")
    detectors = dict(detectors or {})
    detectors.setdefault("out1", DetectorModel())
    detectors.setdefault("out2", DetectorModel())

    mu = brightness.mean_pairs_per_pulse
    weights = _mode_weights(schmidt)
    period = int(repetition_period_ps)
    names = ("trigger", "out1", "out2")
    per_channel = {0: [], 1: [], 2: []}

    n_blocks = (pulses + PULSE_BLOCK - 1) // PULSE_BLOCK
    for block in range(n_blocks):
        p_lo = block * PULSE_BLOCK
        p_hi = min(p_lo + PULSE_BLOCK, pulses)
        n_p = p_hi - p_lo
        rng = _block_rng(seed, block)

        pulse_idx = []
        for k in range(weights.size):
            counts = rng.geometric(1.0 / (1.0 + mu * weights[k]), size=n_p) - 1
            pulse_idx.append(p_lo + np.repeat(np.arange(n_p, dtype=np.int64), counts))
        pulse_idx = np.concatenate(pulse_idx)
        to_out1 = rng.random(pulse_idx.size) < splitter_ratio
        jitter_z = rng.standard_normal(pulse_idx.size)
        survive_u = rng.random(pulse_idx.size)

        base = (pulse_idx + 1) * period
        for code, name, mask in ((1, "out1", to_out1), (2, "out2", ~to_out1)):
            det = detectors[name]
            keep = mask & (survive_u < det.efficiency)
            t = base[keep] + np.rint(det.jitter_sigma_ps * jitter_z[keep]).astype(np.int64)
            per_channel[code].append(np.maximum(t, 0))
        for code, name in ((1, "out1"), (2, "out2")):
            per_channel[code].append(
                _dark_times(rng, detectors[name].dark_count_hz, p_lo * period, p_hi * period))

    per_channel[0].append(np.arange(1, pulses + 1, dtype=np.int64) * period)
    return _finalize_stream(names, per_channel, period, seed,
                            {1: detectors["out1"], 2: detectors["out2"]})
